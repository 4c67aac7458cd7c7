#include "lifshitz/dispersion.hpp"

#include <algorithm>
#include <cmath>

#include "lifshitz/errors.hpp"

namespace lifshitz {

DispersionModel DispersionModel::plasma(double omega_p)
{
    DispersionModel m{ModelKind::Plasma, omega_p, 0.0};
    m.validate();
    return m;
}

DispersionModel DispersionModel::drude(double omega_p, double gamma)
{
    DispersionModel m{ModelKind::Drude, omega_p, gamma};
    m.validate();
    return m;
}

void DispersionModel::validate() const
{
    if (!(omega_p > 0.0) || !std::isfinite(omega_p))
        throw Error(ErrorCode::DomainError, "omega_p must be positive and finite");
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw Error(ErrorCode::DomainError, "gamma must be non-negative and finite");
}

std::string to_string(ModelKind kind)
{
    return kind == ModelKind::Plasma ? "plasma" : "drude";
}

ModelKind parse_model_kind(const std::string& name)
{
    if (name == "plasma")
        return ModelKind::Plasma;
    if (name == "drude")
        return ModelKind::Drude;
    throw Error(ErrorCode::InvalidArgument, "unknown model '" + name + "'");
}

cplx eval_permittivity(const DispersionModel& model, cplx omega)
{
    const double wp2 = model.omega_p * model.omega_p;
    cplx den;
    if (model.kind == ModelKind::Plasma)
        den = omega * omega;
    else
        den = omega * (omega + cplx(0.0, 2.0 * model.gamma));
    if (den == cplx(0.0, 0.0))
        throw Error(ErrorCode::DomainError, "permittivity evaluated at a pole");
    return 1.0 - wp2 / den;
}

SymmetryReport symmetry_report(const DispersionModel& model, const std::vector<cplx>& probes,
                               double tolerance)
{
    if (probes.empty())
        throw Error(ErrorCode::InvalidArgument, "symmetry_report needs at least one probe");
    SymmetryReport r;
    for (cplx w : probes) {
        const cplx e = eval_permittivity(model, w);
        const double scale = std::max(1.0, std::abs(e));
        r.even_violation = std::max(r.even_violation, std::abs(e - eval_permittivity(model, -w)) / scale);
        r.reality_violation = std::max(
            r.reality_violation, std::abs(std::conj(eval_permittivity(model, -std::conj(w))) - e) / scale);
        const cplx ez = eval_permittivity(model, cplx(0.0, std::abs(w)));
        r.imaginary_axis_violation =
            std::max(r.imaginary_axis_violation, std::abs(ez.imag()) / std::max(1.0, std::abs(ez)));
    }
    r.even_in_omega = r.even_violation < tolerance;
    r.real_on_imaginary_axis = r.imaginary_axis_violation < tolerance;
    r.max_violation = std::max(r.even_violation, r.imaginary_axis_violation);
    return r;
}

}  // namespace lifshitz
