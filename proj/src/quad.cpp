#include "lifshitz/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "lifshitz/errors.hpp"

namespace lifshitz::quad {
namespace {

constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525386006, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for the nodes kXgk[1], kXgk[3], ..., kXgk[9]
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

template <class T>
struct Segment {
    double a;
    double b;
    T value;
    double error;
};

template <class T>
Segment<T> gk21(const std::function<T(double)>& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double abs_half = std::abs(half);

    std::array<T, 21> fv;
    fv[20] = f(center);
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        fv[2 * j] = f(center - dx);
        fv[2 * j + 1] = f(center + dx);
    }

    T kronrod = fv[20] * kWgk[10];
    T gauss = T{};
    double resabs = std::abs(fv[20]) * kWgk[10];
    for (int j = 0; j < 10; ++j) {
        const T pair = fv[2 * j] + fv[2 * j + 1];
        kronrod += kWgk[j] * pair;
        resabs += kWgk[j] * (std::abs(fv[2 * j]) + std::abs(fv[2 * j + 1]));
        if (j % 2 == 1)
            gauss += kWg[j / 2] * pair;
    }
    const T mean = kronrod * 0.5;
    double resasc = kWgk[10] * std::abs(fv[20] - mean);
    for (int j = 0; j < 10; ++j)
        resasc += kWgk[j] * (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));

    kronrod *= half;
    resabs *= abs_half;
    resasc *= abs_half;
    double err = std::abs((kronrod - gauss * half));
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
        err = std::max(50.0 * kEps * resabs, err);
    return {a, b, kronrod, err};
}

template <class T>
struct AdaptiveOutcome {
    T value{};
    double error = 0.0;
    long evaluations = 0;
};

template <class T>
AdaptiveOutcome<T> adaptive(const std::function<T(double)>& f, const std::vector<double>& edges,
                            const QuadOptions& opts)
{
    if (edges.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "quadrature needs at least one panel");
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (!(edges[i] > edges[i - 1]))
            throw Error(ErrorCode::InvalidArgument, "quadrature breakpoints must increase");
    }

    auto cmp = [](const Segment<T>& x, const Segment<T>& y) {
        if (x.error != y.error)
            return x.error < y.error;
        return x.a > y.a;
    };
    std::priority_queue<Segment<T>, std::vector<Segment<T>>, decltype(cmp)> heap(cmp);
    std::vector<Segment<T>> frozen;

    AdaptiveOutcome<T> out;
    T total{};
    double total_err = 0.0;
    for (std::size_t i = 1; i < edges.size(); ++i) {
        Segment<T> s = gk21<T>(f, edges[i - 1], edges[i]);
        out.evaluations += 21;
        total += s.value;
        total_err += s.error;
        heap.push(s);
    }

    auto target = [&](const T& v) { return std::max(opts.abs_tol, opts.rel_tol * std::abs(v)); };

    while (!heap.empty() && total_err > target(total)) {
        if (out.evaluations + 42 > opts.max_evaluations)
            break;
        Segment<T> worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const double scale = std::max({std::abs(worst.a), std::abs(worst.b), 1e-300});
        if (worst.b - worst.a < 1e3 * kEps * scale || mid <= worst.a || mid >= worst.b) {
            frozen.push_back(worst);
            continue;
        }
        Segment<T> left = gk21<T>(f, worst.a, mid);
        Segment<T> right = gk21<T>(f, mid, worst.b);
        out.evaluations += 42;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    std::vector<Segment<T>> all = std::move(frozen);
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    for (const auto& s : all) {
        out.value += s.value;
        out.error += s.error;
    }
    if (!std::isfinite(std::abs(out.value)))
        throw Error(ErrorCode::NoConvergence, "quadrature produced a non-finite value");
    if (out.error > target(out.value) && opts.throw_on_budget) {
        std::ostringstream msg;
        msg << "adaptive quadrature did not converge: error estimate " << out.error
            << " after " << out.evaluations << " evaluations";
        throw Error(ErrorCode::NoConvergence, msg.str());
    }
    return out;
}

QuadratureResult to_result(const AdaptiveOutcome<double>& o)
{
    return {o.value, o.error, o.evaluations};
}

struct VectorSegment {
    double a;
    double b;
    std::vector<double> value;
    std::vector<double> error;
    double max_error;
};

VectorSegment gk21_vector(const VectorFn& f, std::size_t dim, double a, double b,
                          std::vector<double>& fv)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double abs_half = std::abs(half);
    fv.assign(21 * dim, 0.0);
    f(center, &fv[20 * dim]);
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[static_cast<std::size_t>(j)];
        f(center - dx, &fv[static_cast<std::size_t>(2 * j) * dim]);
        f(center + dx, &fv[static_cast<std::size_t>(2 * j + 1) * dim]);
    }
    VectorSegment seg{a, b, std::vector<double>(dim), std::vector<double>(dim), 0.0};
    for (std::size_t c = 0; c < dim; ++c) {
        auto v = [&](int i) { return fv[static_cast<std::size_t>(i) * dim + c]; };
        double kronrod = v(20) * kWgk[10];
        double gauss = 0.0;
        double resabs = std::abs(v(20)) * kWgk[10];
        for (int j = 0; j < 10; ++j) {
            const double pair = v(2 * j) + v(2 * j + 1);
            kronrod += kWgk[static_cast<std::size_t>(j)] * pair;
            resabs += kWgk[static_cast<std::size_t>(j)] * (std::abs(v(2 * j)) + std::abs(v(2 * j + 1)));
            if (j % 2 == 1)
                gauss += kWg[static_cast<std::size_t>(j / 2)] * pair;
        }
        const double mean = kronrod * 0.5;
        double resasc = kWgk[10] * std::abs(v(20) - mean);
        for (int j = 0; j < 10; ++j)
            resasc += kWgk[static_cast<std::size_t>(j)] *
                      (std::abs(v(2 * j) - mean) + std::abs(v(2 * j + 1) - mean));
        kronrod *= half;
        resabs *= abs_half;
        resasc *= abs_half;
        double err = std::abs(kronrod - gauss * half);
        if (resasc != 0.0 && err != 0.0)
            err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
        if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
            err = std::max(50.0 * kEps * resabs, err);
        seg.value[c] = kronrod;
        seg.error[c] = err;
        seg.max_error = std::max(seg.max_error, err);
    }
    return seg;
}

}  // namespace

VectorQuadratureResult integrate_vector_panels(const VectorFn& f, std::size_t dim,
                                               const std::vector<double>& edges,
                                               const QuadOptions& opts)
{
    if (edges.size() < 2 || dim == 0)
        throw Error(ErrorCode::InvalidArgument, "quadrature needs at least one panel");
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (!(edges[i] > edges[i - 1]))
            throw Error(ErrorCode::InvalidArgument, "quadrature breakpoints must increase");
    }
    auto cmp = [](const VectorSegment& x, const VectorSegment& y) {
        if (x.max_error != y.max_error)
            return x.max_error < y.max_error;
        return x.a > y.a;
    };
    std::priority_queue<VectorSegment, std::vector<VectorSegment>, decltype(cmp)> heap(cmp);
    std::vector<VectorSegment> frozen;
    std::vector<double> scratch;

    VectorQuadratureResult out;
    std::vector<double> total(dim, 0.0);
    double total_err = 0.0;
    for (std::size_t i = 1; i < edges.size(); ++i) {
        VectorSegment s = gk21_vector(f, dim, edges[i - 1], edges[i], scratch);
        out.evaluations += 21;
        for (std::size_t c = 0; c < dim; ++c)
            total[c] += s.value[c];
        total_err += s.max_error;
        heap.push(std::move(s));
    }
    auto target = [&]() {
        double m = 0.0;
        for (double v : total)
            m = std::max(m, std::abs(v));
        return std::max(opts.abs_tol, opts.rel_tol * m);
    };

    while (!heap.empty() && total_err > target()) {
        if (out.evaluations + 42 > opts.max_evaluations)
            break;
        VectorSegment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const double scale = std::max({std::abs(worst.a), std::abs(worst.b), 1e-300});
        if (worst.b - worst.a < 1e3 * kEps * scale || mid <= worst.a || mid >= worst.b) {
            frozen.push_back(std::move(worst));
            continue;
        }
        VectorSegment left = gk21_vector(f, dim, worst.a, mid, scratch);
        VectorSegment right = gk21_vector(f, dim, mid, worst.b, scratch);
        out.evaluations += 42;
        for (std::size_t c = 0; c < dim; ++c)
            total[c] += left.value[c] + right.value[c] - worst.value[c];
        total_err += left.max_error + right.max_error - worst.max_error;
        heap.push(std::move(left));
        heap.push(std::move(right));
    }

    std::vector<VectorSegment> all = std::move(frozen);
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    out.value.assign(dim, 0.0);
    out.error_estimate.assign(dim, 0.0);
    double err_sum = 0.0;
    for (const auto& s : all) {
        for (std::size_t c = 0; c < dim; ++c) {
            out.value[c] += s.value[c];
            out.error_estimate[c] += s.error[c];
        }
        err_sum += s.max_error;
    }
    for (double v : out.value) {
        if (!std::isfinite(v))
            throw Error(ErrorCode::NoConvergence, "quadrature produced a non-finite value");
    }
    total = out.value;
    if (err_sum > target() && opts.throw_on_budget) {
        std::ostringstream msg;
        msg << "vector quadrature did not converge: error estimate " << err_sum << " after "
            << out.evaluations << " evaluations";
        throw Error(ErrorCode::NoConvergence, msg.str());
    }
    return out;
}

QuadratureResult integrate_adaptive(const RealFn& f, double lo, double hi, double tol)
{
    QuadOptions opts;
    opts.abs_tol = tol;
    return integrate_adaptive(f, lo, hi, opts);
}

QuadratureResult integrate_adaptive(const RealFn& f, double lo, double hi,
                                    const QuadOptions& opts)
{
    if (!(lo < hi))
        throw Error(ErrorCode::InvalidArgument, "integrate_adaptive requires lo < hi");
    return to_result(adaptive<double>(f, {lo, hi}, opts));
}

QuadratureResult integrate_panels(const RealFn& f, const std::vector<double>& edges,
                                  const QuadOptions& opts)
{
    return to_result(adaptive<double>(f, edges, opts));
}

ComplexQuadratureResult integrate_adaptive_complex(const ComplexFn& f, double lo, double hi,
                                                   const QuadOptions& opts)
{
    if (!(lo < hi))
        throw Error(ErrorCode::InvalidArgument, "integrate_adaptive requires lo < hi");
    auto o = adaptive<std::complex<double>>(f, {lo, hi}, opts);
    return {o.value, o.error, o.evaluations};
}

QuadratureResult integrate_semi_infinite(const RealFn& f, double lo, double decay_scale,
                                         double tol)
{
    QuadOptions opts;
    opts.abs_tol = tol;
    return integrate_semi_infinite(f, lo, decay_scale, opts);
}

QuadratureResult integrate_semi_infinite(const RealFn& f, double lo, double decay_scale,
                                         const QuadOptions& opts,
                                         const std::vector<double>& breakpoints)
{
    if (!(decay_scale > 0.0))
        throw Error(ErrorCode::InvalidArgument, "decay_scale must be positive");
    const double s = decay_scale;
    auto mapped = [&](double t) {
        const double one_minus = 1.0 - t;
        if (one_minus <= 0.0)
            return 0.0;
        const double x = lo + s * t / one_minus;
        if (!std::isfinite(x))
            return 0.0;
        const double v = f(x);
        return v * s / (one_minus * one_minus);
    };
    std::vector<double> edges{0.0};
    for (double x : breakpoints) {
        if (x <= lo)
            continue;
        const double t = (x - lo) / (x - lo + s);
        if (t > edges.back() && t < 1.0)
            edges.push_back(t);
    }
    edges.push_back(1.0);
    return to_result(adaptive<double>(mapped, edges, opts));
}

double find_root_bracketed(const RealFn& f, double lo, double hi, double tol)
{
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if (std::signbit(flo) == std::signbit(fhi) || std::isnan(flo) || std::isnan(fhi)) {
        std::ostringstream msg;
        msg << "no sign change on [" << lo << ", " << hi << "]";
        throw Error(ErrorCode::NoSignChange, msg.str());
    }
    for (int iter = 0; iter < 2000; ++iter) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi)
            break;
        if (tol > 0.0 && hi - lo <= tol * std::max(1.0, std::abs(mid)))
            break;
        const double fm = f(mid);
        if (fm == 0.0)
            return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

Derivative differentiate_richardson(const RealFn& f, double x, double h0)
{
    constexpr int kTab = 12;
    constexpr double kCon = 2.0;
    constexpr double kCon2 = kCon * kCon;
    if (!(h0 > 0.0))
        throw Error(ErrorCode::InvalidArgument, "differentiation step must be positive");

    std::array<std::array<double, kTab>, kTab> a{};
    double h = h0;
    Derivative out;
    out.error_estimate = std::numeric_limits<double>::max();
    a[0][0] = (f(x + h) - f(x - h)) / (2.0 * h);
    out.value = a[0][0];
    for (int i = 1; i < kTab; ++i) {
        h /= kCon;
        a[0][i] = (f(x + h) - f(x - h)) / (2.0 * h);
        double fac = kCon2;
        for (int j = 1; j <= i; ++j) {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= kCon2;
            const double errt = std::max(std::abs(a[j][i] - a[j - 1][i]),
                                         std::abs(a[j][i] - a[j - 1][i - 1]));
            if (errt <= out.error_estimate) {
                out.error_estimate = errt;
                out.value = a[j][i];
            }
        }
        out.steps = i + 1;
        if (std::abs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * out.error_estimate) {
            out.noise_limited = true;
            break;
        }
    }
    return out;
}

SeriesResult sum_series(const std::function<double(long)>& term, long first, double tol,
                        long max_terms, double floor)
{
    SeriesResult out;
    double prev = 0.0;
    for (long m = first; m < first + max_terms; ++m) {
        const double t = term(m);
        out.value += t;
        ++out.terms;
        if (m > first && prev != 0.0) {
            const double ratio = std::abs(t / prev);
            if (ratio < 1.0) {
                out.tail_estimate = std::abs(t) * ratio / (1.0 - ratio);
                if (out.tail_estimate <= tol * std::max(std::abs(out.value), floor)) {
                    out.converged = true;
                    return out;
                }
            }
        }
        if (t == 0.0 && m > first) {
            out.tail_estimate = 0.0;
            out.converged = true;
            return out;
        }
        prev = t;
    }
    return out;
}

}  // namespace lifshitz::quad
