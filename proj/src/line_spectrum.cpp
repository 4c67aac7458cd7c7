#include "lifshitz/line_spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "lifshitz/errors.hpp"

namespace lifshitz {

LineSpectrum LineSpectrum::from_lines(std::vector<Line> lines, double merge_tol)
{
    std::stable_sort(lines.begin(), lines.end(),
                     [](const Line& a, const Line& b) { return a.frequency < b.frequency; });
    LineSpectrum out;
    std::size_t i = 0;
    while (i < lines.size()) {
        // cluster anchored at its first member so merging cannot chain
        const double anchor = lines[i].frequency;
        double freq_sum = 0.0;
        std::complex<double> w{};
        std::size_t n = 0;
        while (i < lines.size() && lines[i].frequency - anchor <= merge_tol) {
            freq_sum += lines[i].frequency;
            w += lines[i].weight;
            ++n;
            ++i;
        }
        if (w != std::complex<double>(0.0, 0.0))
            out.lines_.push_back({freq_sum / static_cast<double>(n), w});
    }
    return out;
}

LineSpectrum LineSpectrum::as_positive(double rel_tol) const
{
    const double scale = max_abs_weight();
    LineSpectrum out;
    out.positive_ = true;
    for (const Line& l : lines_) {
        if (std::abs(l.weight) <= rel_tol * scale)
            continue;
        if (l.weight.real() <= 0.0 || std::abs(l.weight.imag()) > rel_tol * scale)
            throw Error(ErrorCode::DomainError, "spectrum has a non-positive weight");
        out.lines_.push_back({l.frequency, {l.weight.real(), 0.0}});
    }
    return out;
}

std::optional<std::complex<double>> LineSpectrum::weight_at(double frequency, double tol) const
{
    auto it = std::lower_bound(lines_.begin(), lines_.end(), frequency - tol,
                               [](const Line& l, double f) { return l.frequency < f; });
    if (it != lines_.end() && std::abs(it->frequency - frequency) <= tol)
        return it->weight;
    return std::nullopt;
}

double LineSpectrum::max_abs_weight() const
{
    double m = 0.0;
    for (const Line& l : lines_)
        m = std::max(m, std::abs(l.weight));
    return m;
}

std::complex<double> LineSpectrum::total_weight() const
{
    std::complex<double> s{};
    for (const Line& l : lines_)
        s += l.weight;
    return s;
}

}  // namespace lifshitz
