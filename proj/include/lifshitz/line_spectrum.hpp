#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace lifshitz {

// weight * delta(omega - frequency)
struct Line {
    double frequency = 0.0;
    std::complex<double> weight{};
};

// Finite delta comb with strictly increasing frequencies.
class LineSpectrum {
public:
    LineSpectrum() = default;

    // Sorts, merges lines closer than merge_tol (weights add) and drops
    // exact-zero weights.
    static LineSpectrum from_lines(std::vector<Line> lines, double merge_tol = 0.0);

    // Returns a copy flagged positive: weights must be real and > 0 up to
    // rel_tol * max|w|; lines below that threshold are dropped and imaginary
    // round-off is discarded. Throws DomainError otherwise.
    LineSpectrum as_positive(double rel_tol = 1e-12) const;

    const std::vector<Line>& lines() const { return lines_; }
    std::size_t size() const { return lines_.size(); }
    bool empty() const { return lines_.empty(); }
    bool positive() const { return positive_; }

    std::optional<std::complex<double>> weight_at(double frequency, double tol) const;
    double max_abs_weight() const;
    std::complex<double> total_weight() const;

private:
    std::vector<Line> lines_;
    bool positive_ = false;
};

}  // namespace lifshitz
