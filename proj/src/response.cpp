#include "lifshitz/response.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "lifshitz/errors.hpp"

namespace lifshitz {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr const char* kRetardedBypass = "omega -> omega + i0 (retarded)";

bool acts_as_plasma(const DispersionModel& m)
{
    return m.kind == ModelKind::Plasma || m.gamma == 0.0;
}

void require_plasma(const ToyGreenModel& model)
{
    model.validate();
    if (model.dispersion.kind != ModelKind::Plasma)
        throw Error(ErrorCode::ModelMismatch, "operation requires the plasma model");
}

PoleCatalog plasma_catalog(double g, double wp)
{
    PoleCatalog c;
    c.poles.push_back({cplx(-wp, 0.0), cplx(-g / (2.0 * wp), 0.0), PoleClass::RealAxisLimit});
    c.poles.push_back({cplx(wp, 0.0), cplx(g / (2.0 * wp), 0.0), PoleClass::RealAxisLimit});
    c.bypass = kRetardedBypass;
    return c;
}

PoleCatalog drude_catalog(double g, double wp, double gamma)
{
    const double wt = std::sqrt(wp * wp - gamma * gamma);
    const cplx ig(0.0, gamma);
    PoleCatalog c;
    c.poles.push_back({cplx(-wt, -gamma), -g / (2.0 * wt) + ig * g / (wt * (wt + ig)),
                       PoleClass::LowerHalfPlane});
    c.poles.push_back({cplx(0.0, 0.0), -2.0 * ig * g / (wp * wp), PoleClass::Origin});
    c.poles.push_back({cplx(wt, -gamma), g / (2.0 * wt) + ig * g / (wt * (wt - ig)),
                       PoleClass::LowerHalfPlane});
    return c;
}

}  // namespace

void ToyGreenModel::validate() const
{
    if (!(g > 0.0) || !std::isfinite(g))
        throw Error(ErrorCode::DomainError, "coupling g must be positive");
    dispersion.validate();
}

std::string to_string(PoleClass cls)
{
    switch (cls) {
    case PoleClass::RealAxisLimit: return "RealAxisLimit";
    case PoleClass::LowerHalfPlane: return "LowerHalfPlane";
    case PoleClass::Origin: return "Origin";
    }
    return "Unknown";
}

std::string to_string(FdtVerdict v)
{
    return v == FdtVerdict::Compatible ? "Compatible" : "Incompatible";
}

cplx toy_green(const ToyGreenModel& model, cplx omega)
{
    model.validate();
    const cplx den = omega * omega * eval_permittivity(model.dispersion, omega);
    if (den == cplx(0.0, 0.0))
        throw Error(ErrorCode::OnPole, "toy Green function evaluated at a pole");
    return model.g / den;
}

PlasmaLines green_plasma_lines(const ToyGreenModel& model)
{
    require_plasma(model);
    const double wp = model.dispersion.omega_p;
    const double c = kPi * model.g / (2.0 * wp);
    PlasmaLines out;
    out.im_part = LineSpectrum::from_lines({{-wp, cplx(c, 0.0)}, {wp, cplx(-c, 0.0)}});
    out.catalog = plasma_catalog(model.g, wp);
    return out;
}

LineSpectrum plasma_correlator_spectrum(const ToyGreenModel& model, double beta, double hbar)
{
    require_plasma(model);
    if (!(beta > 0.0))
        throw Error(ErrorCode::DomainError, "beta must be positive");
    const double wp = model.dispersion.omega_p;
    const double x = beta * hbar * wp;
    const double pref = kPi * model.g * hbar / wp;
    // 1/(e^x - 1) and 1/(1 - e^-x) without overflow at large x
    const double lower = pref / std::expm1(x);
    const double upper = pref / -std::expm1(-x);
    return LineSpectrum::from_lines({{-wp, cplx(lower, 0.0)}, {wp, cplx(upper, 0.0)}})
        .as_positive(0.0);
}

DrudeDecomposition drude_decomposition(const ToyGreenModel& model, cplx omega)
{
    model.validate();
    const DispersionModel& d = model.dispersion;
    if (d.kind != ModelKind::Drude)
        throw Error(ErrorCode::ModelMismatch, "drude_decomposition requires the Drude model");
    if (d.gamma >= d.omega_p)
        throw Error(ErrorCode::DegenerateModel,
                    "gamma >= omega_p: shifted plasma frequency is not real");
    const double g = model.g;
    const double wp = d.omega_p;
    const double gamma = d.gamma;
    const double wt = std::sqrt(wp * wp - gamma * gamma);
    const cplx ig(0.0, gamma);

    const cplx d_plus = omega - wt + ig;
    const cplx d_minus = omega + wt + ig;
    if (omega == cplx(0.0, 0.0) || d_plus == cplx(0.0, 0.0) || d_minus == cplx(0.0, 0.0))
        throw Error(ErrorCode::OnPole, "Drude Green function evaluated at a pole");

    DrudeDecomposition out;
    out.g1 = g / (2.0 * wt) * (1.0 / d_plus - 1.0 / d_minus);
    out.g2 = -2.0 * ig * g / (wp * wp) / omega + ig * g / (wt * (wt + ig)) / d_minus +
             ig * g / (wt * (wt - ig)) / d_plus;
    out.total = out.g1 + out.g2;
    out.catalog = pole_catalog(model);
    return out;
}

PoleCatalog pole_catalog(const ToyGreenModel& model)
{
    model.validate();
    const DispersionModel& d = model.dispersion;
    if (acts_as_plasma(d))
        return plasma_catalog(model.g, d.omega_p);
    if (d.gamma >= d.omega_p)
        throw Error(ErrorCode::DegenerateModel,
                    "gamma >= omega_p: shifted plasma frequency is not real");
    return drude_catalog(model.g, d.omega_p, d.gamma);
}

FdtCompatibilityReport fdt_compatibility_report(const ToyGreenModel& model, double beta)
{
    model.validate();
    if (!(beta > 0.0))
        throw Error(ErrorCode::DomainError, "beta must be positive");
    FdtCompatibilityReport r;
    if (acts_as_plasma(model.dispersion)) {
        ToyGreenModel plasma = model;
        plasma.dispersion = DispersionModel::plasma(model.dispersion.omega_p);
        const LineSpectrum im = green_plasma_lines(plasma).im_part;
        r.im_part_real_comb = true;
        for (const Line& l : im.lines())
            r.im_part_real_comb = r.im_part_real_comb && l.weight.imag() == 0.0;
        const LineSpectrum j = plasma_correlator_spectrum(plasma, beta);
        r.positive_spectrum_constructible = j.positive() && j.size() == 2;
        r.reasons.push_back("Im G^r is a real delta comb at +-omega_p");
        r.reasons.push_back("correlator spectral density has strictly positive weights");
    } else {
        const PoleCatalog c = pole_catalog(model);
        r.im_part_real_comb = false;
        r.positive_spectrum_constructible = false;
        for (const Pole& p : c.poles) {
            std::ostringstream s;
            s.precision(6);
            if (p.cls == PoleClass::LowerHalfPlane) {
                s << "pole at " << p.location.real() << std::showpos << p.location.imag()
                  << "i lies off the real axis; the delta-function identity for 1/(x - i0) "
                     "does not apply";
            } else if (p.cls == PoleClass::Origin) {
                s << "pole at the origin with imaginary residue " << p.residue.imag()
                  << "i contributes to the real part of G^r";
            }
            r.reasons.push_back(s.str());
        }
    }
    r.verdict = (r.im_part_real_comb && r.positive_spectrum_constructible)
                    ? FdtVerdict::Compatible
                    : FdtVerdict::Incompatible;
    return r;
}

}  // namespace lifshitz
