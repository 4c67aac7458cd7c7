#pragma once

#include <complex>
#include <string>
#include <vector>

namespace lifshitz {

using cplx = std::complex<double>;

enum class ModelKind { Plasma, Drude };

struct DispersionModel {
    ModelKind kind = ModelKind::Plasma;
    double omega_p = 1.0;
    // damping; the Drude formula uses 2*gamma. Ignored for Plasma.
    double gamma = 0.0;

    static DispersionModel plasma(double omega_p = 1.0);
    static DispersionModel drude(double omega_p, double gamma);

    // gamma as seen by the formulas (0 for Plasma)
    double effective_gamma() const { return kind == ModelKind::Plasma ? 0.0 : gamma; }
    void validate() const;
};

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

// 1 - wp^2/w^2 (Plasma) or 1 - wp^2/(w(w + 2i gamma)) (Drude).
// Throws DomainError at the poles of the formula.
cplx eval_permittivity(const DispersionModel& model, cplx omega);

struct SymmetryReport {
    bool even_in_omega = false;
    bool real_on_imaginary_axis = false;
    double max_violation = 0.0;
    double even_violation = 0.0;
    double imaginary_axis_violation = 0.0;
    // max |conj(eps(-conj w)) - eps(w)|, zero for any physical response
    double reality_violation = 0.0;
};

// Even-ness is tested at each probe; reality on the imaginary axis at
// i|w| for each probe. Violations are relative to max(1, |eps|).
SymmetryReport symmetry_report(const DispersionModel& model, const std::vector<cplx>& probes,
                               double tolerance = 1e-12);

}  // namespace lifshitz
