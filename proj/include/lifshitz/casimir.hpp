#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "lifshitz/cavity.hpp"
#include "lifshitz/quad.hpp"

namespace lifshitz {

enum class EnergyRoute { ModeSumRealAxis, ImaginaryAxis, Matsubara };

std::string to_string(EnergyRoute r);

struct TruncationReport {
    double quadrature_error = 0.0;  // accumulated error estimates
    double tail_bound = 0.0;        // analytic bound on truncated tails
    long evaluations = 0;
    long matsubara_terms = 0;
    double k_decay_scale = 0.0;
    double zeta_decay_scale = 0.0;
    double omega_cut = 0.0;
};

// Energies are per unit plate area in units of hbar omega_p^3 / c^2.
struct EnergyResult {
    double value = 0.0;
    EnergyRoute route = EnergyRoute::ImaginaryAxis;
    TruncationReport truncation;
};

struct CasimirOptions {
    double rel_tol = 1e-10;
};

// D(i zeta, k) from the real imaginary-axis formulas (k_j = i kappa_j).
double dispersion_imaginary_axis(double zeta, double k, const CavityConfig& config);
// ln D(i zeta, k), accurate when D is close to 1
double log_dispersion_imaginary_axis(double zeta, double k, const CavityConfig& config);

// (1/2pi) int_0^inf ln D(i zeta, k) d zeta for config.sigma.
quad::QuadratureResult imaginary_axis_per_k(const CavityConfig& config, double k,
                                            double rel_tol = 1e-12);

// E = (1/2pi) sum_sigma int k dk / 2pi int_0^inf d zeta ln D(i zeta, k).
// Sums both polarizations; config.sigma is ignored.
EnergyResult energy_imaginary_axis(const CavityConfig& config, const CasimirOptions& opts = {});

struct RealAxisReport {
    double mode_sum_part = 0.0;      // (1/2) sum of mode frequencies - reflection pole pair
    double branch_point_part = 0.0;  // omega_minus / 4 from the square-root zero of D
    double band_part = 0.0;          // (1/2pi) int omega d delta over (omega_minus, omega_plus)
    double continuum_part = 0.0;     // (1/2pi) int omega d delta over (omega_plus, inf)
    double real_axis_total = 0.0;
    double imaginary_axis_part = 0.0;
    double mismatch = 0.0;
    double bound = 0.0;       // combined quadrature and tail bound
    bool passed = false;      // mismatch < max(1e-3 |imaginary_axis_part|, bound)
    ModeSpectrum modes;
    std::optional<double> reflection_pole;
    TruncationReport truncation;
};

// Per-(sigma, k) comparison of the real-frequency spectral bracket, with the
// large-gap limit subtracted, against the imaginary-axis integral.
RealAxisReport energy_real_axis_per_k(const CavityConfig& config, const KPoint& kp,
                                      double omega_cut);

// hbar w / 2 + T ln(1 - e^{-w/T}); throws DivergentFreeEnergy for w = 0, T > 0.
double oscillator_free_energy(double omega, double temperature);

struct SeriesValue {
    double value = 0.0;
    double truncation_bound = 0.0;
    int terms = 0;
};

// hbar w / 2 - T sum_{n=1}^{terms} e^{-n w/T} / n with the geometric tail bound.
SeriesValue oscillator_free_energy_series(double omega, double temperature, int terms);

struct MatsubaraGrid {
    double temperature = 0.0;
    // 0: choose M adaptively until the tail bound drops below tolerance
    long max_terms = 0;
    double tolerance = 1e-12;
    static constexpr double m0_weight = 0.5;

    double zeta(long m) const;
    void validate() const;
};

// m = 0 term ln D(i 0+, k), the limit of ln D(i zeta, k) as zeta -> 0 by
// Richardson extrapolation from zeta = 1e-8 omega_p.
double matsubara_zero_term(const CavityConfig& config, double k);

// T sum'_m ln D(i zeta_m, k) for config.sigma, with the tail bound.
struct MatsubaraSum {
    double value = 0.0;
    double tail_bound = 0.0;
    long terms = 0;
};
MatsubaraSum matsubara_sum_per_k(const CavityConfig& config, const MatsubaraGrid& grid, double k);

EnergyResult free_energy_matsubara(const CavityConfig& config, const MatsubaraGrid& grid,
                                   const CasimirOptions& opts = {});

struct PressureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    double step = 0.0;
    bool widened = false;
};

// -dE/d(2a) (or -dF/d(2a) with a grid) by Richardson central differences.
PressureResult casimir_pressure(const CavityConfig& config,
                                const std::optional<MatsubaraGrid>& thermal = std::nullopt,
                                const CasimirOptions& opts = {});

// (k / 2pi) ln D(i zeta_m, k) rewritten with k^2 = zeta_m^2 (p^2 - 1),
// k dk = zeta_m^2 p dp: returns zeta_m^2 p / (2pi) ln D. config.sigma only.
double classic_lifshitz_integrand(const CavityConfig& config, double temperature, long m,
                                  double p);

struct AnomalyOptions {
    double rel_tol = 1e-9;
    bool one_sided_diagnostic = true;
    bool throw_on_divergence = false;
};

struct AnomalyResult {
    std::complex<double> value;            // partial sum up to m_max
    std::vector<std::complex<double>> partial_sums;
    std::vector<double> term_magnitudes;   // |contribution of each m|
    // max |S_m - S_M| over m in [M/2, M]: envelope of the oscillating remainder
    double tail_estimate = 0.0;
    double noise_floor = 0.0;              // accumulated quadrature error
    bool converged = false;                // tail_estimate <= 0.1 |value|
    // Re of the term when ln D(-i zeta) is taken from one edge of the k1 cut
    double one_sided_real_part = 0.0;
};

// Extra imaginary term produced by the Drude model's broken w -> -w symmetry.
// ln D(-i zeta) is the average of its two edge values on the k1 cut, i.e.
// ln |D(-i zeta)|.
AnomalyResult drude_anomaly(const CavityConfig& config, double temperature, long m_max,
                            const AnomalyOptions& opts = {});

}  // namespace lifshitz
