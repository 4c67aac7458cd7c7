#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace lifshitz::quad {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};

struct ComplexQuadratureResult {
    std::complex<double> value{};
    double error_estimate = 0.0;
    long evaluations = 0;
};

// Converged when error_estimate <= max(abs_tol, rel_tol * |value|).
struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 0.0;
    long max_evaluations = 400000;
    // false: return the best estimate instead of throwing NoConvergence
    bool throw_on_budget = true;
};

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<std::complex<double>(double)>;

// Globally adaptive 21-point Gauss-Kronrod.
QuadratureResult integrate_adaptive(const RealFn& f, double lo, double hi, double tol);
QuadratureResult integrate_adaptive(const RealFn& f, double lo, double hi,
                                    const QuadOptions& opts);

// Same, starting from the partition given by sorted breakpoints (endpoints
// included). Used for oscillatory integrands split at known phase zeros.
QuadratureResult integrate_panels(const RealFn& f, const std::vector<double>& edges,
                                  const QuadOptions& opts);

ComplexQuadratureResult integrate_adaptive_complex(const ComplexFn& f, double lo, double hi,
                                                   const QuadOptions& opts);

struct VectorQuadratureResult {
    std::vector<double> value;
    std::vector<double> error_estimate;
    long evaluations = 0;
};

// f(x, out) writes dim components. One partition serves all components; the
// segment with the largest component error is bisected until the summed
// max-component error is below max(abs_tol, rel_tol * max_c |value_c|).
using VectorFn = std::function<void(double, double*)>;
VectorQuadratureResult integrate_vector_panels(const VectorFn& f, std::size_t dim,
                                               const std::vector<double>& edges,
                                               const QuadOptions& opts);

// [lo, inf) mapped onto [0, 1) via x = lo + s t / (1 - t). Interior
// breakpoints (in x) are mapped and used as the initial partition.
QuadratureResult integrate_semi_infinite(const RealFn& f, double lo, double decay_scale,
                                         double tol);
QuadratureResult integrate_semi_infinite(const RealFn& f, double lo, double decay_scale,
                                         const QuadOptions& opts,
                                         const std::vector<double>& breakpoints = {});

// Bisection. tol is the bracket width relative to max(1, |x|); tol <= 0
// bisects to machine precision. Throws NoSignChange.
double find_root_bracketed(const RealFn& f, double lo, double hi, double tol = 0.0);

struct Derivative {
    double value = 0.0;
    double error_estimate = 0.0;
    // true when the tableau stopped because round-off started to dominate
    bool noise_limited = false;
    int steps = 0;
};

// Central differences with step halving and Richardson extrapolation.
Derivative differentiate_richardson(const RealFn& f, double x, double h0);

struct SeriesResult {
    double value = 0.0;
    double tail_estimate = 0.0;
    long terms = 0;
    bool converged = false;
};

// Sums term(first) + term(first+1) + ... until the geometric tail estimate
// drops below tol * max(|sum|, floor). Terms must eventually decay
// monotonically in magnitude.
SeriesResult sum_series(const std::function<double(long)>& term, long first, double tol,
                        long max_terms, double floor = 1e-300);

}  // namespace lifshitz::quad
