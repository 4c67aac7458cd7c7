#include "lifshitz/cavity.hpp"

#include <cmath>
#include <numbers>

#include "lifshitz/errors.hpp"
#include "lifshitz/quad.hpp"

namespace lifshitz {

std::string to_string(Polarization p)
{
    return p == Polarization::TE ? "TE" : "TM";
}

Polarization parse_polarization(const std::string& name)
{
    if (name == "TE" || name == "te")
        return Polarization::TE;
    if (name == "TM" || name == "tm")
        return Polarization::TM;
    throw Error(ErrorCode::InvalidArgument, "unknown polarization '" + name + "'");
}

void CavityConfig::validate() const
{
    if (!(half_gap > 0.0) || !std::isfinite(half_gap))
        throw Error(ErrorCode::DomainError, "half gap a must be positive");
    model.validate();
}

CavityConfig CavityConfig::with_sigma(Polarization s) const
{
    CavityConfig c = *this;
    c.sigma = s;
    return c;
}

KPoint KPoint::make(double k, const DispersionModel& model)
{
    if (!(k >= 0.0) || !std::isfinite(k))
        throw Error(ErrorCode::DomainError, "transverse wavenumber must be >= 0");
    return {k, k, std::sqrt(model.omega_p * model.omega_p + k * k)};
}

cplx upper_branch_sqrt(cplx x)
{
    if (x.imag() == 0.0) {
        // exact real radicand: real-axis edges and the imaginary axis
        if (x.real() >= 0.0)
            return {std::sqrt(x.real()), 0.0};
        return {0.0, std::sqrt(-x.real())};
    }
    const cplx r = std::sqrt(x);
    return r.imag() < 0.0 ? -r : r;
}

Wavevectors transverse_wavevectors(cplx omega, const KPoint& kp, const DispersionModel& model)
{
    if (omega.imag() == 0.0) {
        const double w = std::abs(omega.real());
        if (w == kp.omega_minus || (model.kind == ModelKind::Plasma && w == kp.omega_plus))
            throw Error(ErrorCode::BranchPointError, "frequency sits on a branch point");
    }
    const cplx w2 = omega * omega;
    const cplx eps = eval_permittivity(model, omega);
    const double k2 = kp.k * kp.k;
    return {upper_branch_sqrt(eps * w2 - k2), upper_branch_sqrt(w2 - k2)};
}

cplx reflection_from(const Wavevectors& w, cplx eps1, Polarization sigma)
{
    cplx num, den;
    if (sigma == Polarization::TE) {
        num = CavityConfig::mu2 * w.k1 - CavityConfig::mu1 * w.k2;
        den = CavityConfig::mu2 * w.k1 + CavityConfig::mu1 * w.k2;
    } else {
        num = CavityConfig::eps2 * w.k1 - eps1 * w.k2;
        den = CavityConfig::eps2 * w.k1 + eps1 * w.k2;
    }
    if (den == cplx(0.0, 0.0))
        throw Error(ErrorCode::DenominatorZero, "reflection amplitude has a pole here");
    return num / den;
}

cplx reflection_amplitude(cplx omega, const KPoint& kp, const DispersionModel& model,
                          Polarization sigma)
{
    return reflection_from(transverse_wavevectors(omega, kp, model),
                           eval_permittivity(model, omega), sigma);
}

cplx dispersion_from(const Wavevectors& w, cplx eps1, double half_gap, Polarization sigma)
{
    const cplx r = reflection_from(w, eps1, sigma);
    return 1.0 - r * r * std::exp(cplx(0.0, 4.0 * half_gap) * w.k2);
}

cplx dispersion_function(cplx omega, const CavityConfig& config, const KPoint& kp)
{
    return dispersion_from(transverse_wavevectors(omega, kp, config.model),
                           eval_permittivity(config.model, omega), config.half_gap, config.sigma);
}

std::optional<double> reflection_pole(const CavityConfig& config, const KPoint& kp)
{
    if (config.sigma == Polarization::TE || config.model.kind != ModelKind::Plasma || kp.k <= 0.0)
        return std::nullopt;
    const double wp2 = config.model.omega_p * config.model.omega_p;
    const double wm2 = kp.omega_minus * kp.omega_minus;
    const double wpl2 = kp.omega_plus * kp.omega_plus;
    // w^2 (k1 + eps k2) / i with both wavevectors evanescent
    auto g = [&](double w) {
        const double w2 = w * w;
        return w2 * std::sqrt(wpl2 - w2) + (w2 - wp2) * std::sqrt(std::max(wm2 - w2, 0.0));
    };
    return quad::find_root_bracketed(g, 0.0, kp.omega_minus);
}

double band_phase(double omega, const CavityConfig& config, const KPoint& kp)
{
    if (!(omega > kp.omega_minus && omega < kp.omega_plus))
        throw Error(ErrorCode::DomainError, "band phase needs omega_minus < omega < omega_plus");
    const double w2 = omega * omega;
    const double kappa1 = std::sqrt(kp.omega_plus * kp.omega_plus - w2);
    const double k2 = std::sqrt(w2 - kp.omega_minus * kp.omega_minus);
    const double eps = config.sigma == Polarization::TE
                           ? 1.0
                           : 1.0 - config.model.omega_p * config.model.omega_p / w2;
    const double theta = std::atan2(kappa1, eps * k2);
    return 2.0 * (std::numbers::pi - 2.0 * theta) + 4.0 * config.half_gap * k2;
}

double continuum_phase_shift(double omega, const CavityConfig& config, const KPoint& kp)
{
    if (!(omega > kp.omega_plus))
        throw Error(ErrorCode::DomainError, "continuum phase needs omega > omega_plus");
    return -std::arg(dispersion_function(cplx(omega, 0.0), config, kp));
}

double continuum_phase_shift_at_edge(const CavityConfig& config, const KPoint& kp)
{
    const double k2 = std::sqrt(kp.omega_plus * kp.omega_plus - kp.omega_minus * kp.omega_minus);
    return -std::arg(1.0 - std::exp(cplx(0.0, 4.0 * config.half_gap * k2)));
}

}  // namespace lifshitz
