#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lifshitz/dispersion.hpp"

namespace lifshitz {

enum class Polarization { TE, TM };

std::string to_string(Polarization p);
Polarization parse_polarization(const std::string& name);

// Two half-spaces of permittivity eps1 (the model) separated by a vacuum gap
// of width 2a.
struct CavityConfig {
    double half_gap = 1.0;
    DispersionModel model;
    Polarization sigma = Polarization::TM;

    static constexpr double eps2 = 1.0;
    static constexpr double mu1 = 1.0;
    static constexpr double mu2 = 1.0;

    void validate() const;
    CavityConfig with_sigma(Polarization s) const;
};

struct KPoint {
    double k = 0.0;
    double omega_minus = 0.0;  // c k
    double omega_plus = 0.0;   // sqrt(omega_p^2 + c^2 k^2)

    static KPoint make(double k, const DispersionModel& model);
};

struct Wavevectors {
    cplx k1;
    cplx k2;
};

// k_j = sqrt(eps_j w^2 - k^2) on the sheet with Im k_j >= 0. On the real
// axis and the imaginary axis (where the radicand is exactly real) the
// root is taken from explicit edge formulas: +sqrt(X) for X > 0 (upper
// edge of the continuum cut), i sqrt(-X) for X < 0.
Wavevectors transverse_wavevectors(cplx omega, const KPoint& kp, const DispersionModel& model);

// sqrt with Im >= 0, using the edge formulas above for real radicands.
cplx upper_branch_sqrt(cplx x);

cplx reflection_amplitude(cplx omega, const KPoint& kp, const DispersionModel& model,
                          Polarization sigma);

// Fresnel amplitude from explicit wavevectors; eps2 = mu1 = mu2 = 1.
cplx reflection_from(const Wavevectors& w, cplx eps1, Polarization sigma);

// D = 1 - r^2 e^{4 i a k2}
cplx dispersion_function(cplx omega, const CavityConfig& config, const KPoint& kp);

// Same quantity from explicitly supplied wavevectors and permittivity.
cplx dispersion_from(const Wavevectors& w, cplx eps1, double half_gap, Polarization sigma);

// Pole of r_TM on (0, omega_minus) where k1 + eps k2 = 0 (plasma model).
// TE has none. Independent of the gap width.
std::optional<double> reflection_pole(const CavityConfig& config, const KPoint& kp);

// Phase of D = 1 - e^{i phi} inside the band (omega_minus, omega_plus):
// phi = 2 arg r + 4 a k2 with arg r = pi - 2 atan2(|k1|, eps k2).
double band_phase(double omega, const CavityConfig& config, const KPoint& kp);

// -arg D on the continuum edge omega > omega_plus (principal value).
double continuum_phase_shift(double omega, const CavityConfig& config, const KPoint& kp);
// The same at omega_plus itself (k1 = 0, r = -1).
double continuum_phase_shift_at_edge(const CavityConfig& config, const KPoint& kp);

struct PhaseSample {
    double omega;
    double delta;
};

struct ModeSpectrum {
    KPoint kpoint;
    Polarization sigma = Polarization::TM;
    double half_gap = 0.0;
    std::vector<double> surface_modes;
    std::vector<double> waveguide_modes;
    std::vector<PhaseSample> phase_curve;
    std::vector<double> reflection_poles;
    int surface_winding = 0;
    int waveguide_winding = 0;
    double max_residual = 0.0;
    double omega_cut = 0.0;
};

struct ModeOptions {
    // phase curve sampled on (omega_plus, omega_cut_factor * omega_plus)
    double omega_cut_factor = 10.0;
    int grid_points = 2000;
    int refinements = 3;
    bool cross_check = true;
};

// Real roots of D on (0, omega_minus) and (omega_minus, omega_plus) for the
// plasma model, cross-checked against argument-principle counts.
ModeSpectrum find_modes(const CavityConfig& config, const KPoint& kp, const ModeOptions& opts = {});

// Unwrapped delta on [lo, hi] subject to |jump| < pi/2 between neighbours.
std::vector<PhaseSample> sample_phase_shift(const CavityConfig& config, const KPoint& kp, double lo,
                                            double hi, int initial_points);

// (1/pi) d delta / d omega on the continuum edge.
double spectral_density_shift(const CavityConfig& config, const KPoint& kp, double omega);

struct Rect {
    double re_lo;
    double re_hi;
    double im_lo;
    double im_hi;
};

struct WindingResult {
    int count = 0;
    double raw = 0.0;
    double quality = 0.0;   // distance of raw from the nearest integer
    long evaluations = 0;
};

// (1/2 pi i) of the closed integral of f'/f counter-clockwise around rect.
WindingResult winding_number(const std::function<cplx(cplx)>& f, const Rect& rect);

WindingResult uhp_winding_number(const CavityConfig& config, const KPoint& kp, const Rect& rect);

}  // namespace lifshitz
