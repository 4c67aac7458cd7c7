#pragma once

#include <string>
#include <vector>

#include "lifshitz/dispersion.hpp"
#include "lifshitz/line_spectrum.hpp"

namespace lifshitz {

// G^r(w) = g / (w^2 eps(w)) with an unspecified positive coupling g.
struct ToyGreenModel {
    double g = 1.0;
    DispersionModel dispersion;

    void validate() const;
};

enum class PoleClass { RealAxisLimit, LowerHalfPlane, Origin };

std::string to_string(PoleClass cls);

struct Pole {
    cplx location;
    cplx residue;
    PoleClass cls;
};

struct PoleCatalog {
    std::vector<Pole> poles;
    // analytic bypass prescription for real-axis poles; empty if none
    std::string bypass;
};

struct PlasmaLines {
    LineSpectrum im_part;
    PoleCatalog catalog;
};

cplx toy_green(const ToyGreenModel& model, cplx omega);

// Im G^r as a two-line comb plus the poles at +-omega_p.
PlasmaLines green_plasma_lines(const ToyGreenModel& model);

// Correlator spectral density built from Im G^r via detailed balance.
LineSpectrum plasma_correlator_spectrum(const ToyGreenModel& model, double beta,
                                        double hbar = 1.0);

struct DrudeDecomposition {
    cplx g1;
    cplx g2;
    cplx total;
    PoleCatalog catalog;
};

// Underdamped only (gamma < omega_p): G = G1 + G2 with G1 the shifted
// plasma pair and G2 the three-pole remainder including the origin.
DrudeDecomposition drude_decomposition(const ToyGreenModel& model, cplx omega);

PoleCatalog pole_catalog(const ToyGreenModel& model);

enum class FdtVerdict { Compatible, Incompatible };

std::string to_string(FdtVerdict v);

struct FdtCompatibilityReport {
    bool im_part_real_comb = false;
    bool positive_spectrum_constructible = false;
    FdtVerdict verdict = FdtVerdict::Incompatible;
    std::vector<std::string> reasons;
};

FdtCompatibilityReport fdt_compatibility_report(const ToyGreenModel& model, double beta);

}  // namespace lifshitz
