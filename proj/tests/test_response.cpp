#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "lifshitz/errors.hpp"
#include "lifshitz/response.hpp"

using namespace lifshitz;

namespace {

constexpr double kPi = std::numbers::pi;

ToyGreenModel plasma_model(double g, double wp)
{
    return {g, DispersionModel::plasma(wp)};
}

ToyGreenModel drude_model(double g, double wp, double gamma)
{
    return {g, DispersionModel::drude(wp, gamma)};
}

cplx direct_green(const ToyGreenModel& m, cplx w)
{
    return m.g / (w * w * eval_permittivity(m.dispersion, w));
}

}  // namespace

TEST_CASE("plasma Im G lines")
{
    const auto a = green_plasma_lines(plasma_model(1.0, 1.0));
    REQUIRE(a.im_part.size() == 2);
    CHECK(a.im_part.lines()[0].frequency == -1.0);
    CHECK(std::abs(a.im_part.lines()[0].weight - cplx(kPi / 2, 0.0)) < 1e-15);
    CHECK(a.im_part.lines()[1].frequency == 1.0);
    CHECK(std::abs(a.im_part.lines()[1].weight - cplx(-kPi / 2, 0.0)) < 1e-15);
    CHECK(a.im_part.lines()[0].weight == -a.im_part.lines()[1].weight);

    const auto b = green_plasma_lines(plasma_model(2.0, 2.0));
    CHECK(b.im_part.lines()[0].frequency == -2.0);
    CHECK(std::abs(b.im_part.lines()[0].weight - cplx(kPi / 2, 0.0)) < 1e-15);
    CHECK(std::abs(b.im_part.lines()[1].weight - cplx(-kPi / 2, 0.0)) < 1e-15);

    REQUIRE(a.catalog.poles.size() == 2);
    for (const auto& p : a.catalog.poles)
        CHECK(p.cls == PoleClass::RealAxisLimit);
    CHECK_FALSE(a.catalog.bypass.empty());

    CHECK_THROWS_AS(green_plasma_lines(drude_model(1.0, 1.0, 0.1)), Error);
}

TEST_CASE("Im G lines agree with the retarded limit of the toy function")
{
    // Im G(w + i eta) integrated across a line tends to the line weight
    const auto m = plasma_model(1.3, 0.8);
    const double eta = 1e-7;
    const double half = 1e-3;
    double integral = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double w = 0.8 - half + 2.0 * half * (i + 0.5) / n;
        integral += toy_green(m, {w, eta}).imag() * 2.0 * half / n;
    }
    const auto lines = green_plasma_lines(m).im_part;
    CHECK(std::abs(integral - lines.lines()[1].weight.real()) < 1e-3 * std::abs(integral));
}

TEST_CASE("plasma correlator spectrum")
{
    const auto cold = plasma_correlator_spectrum(plasma_model(1.0, 1.0), 200.0);
    CHECK(cold.positive());
    CHECK(cold.lines().size() >= 1);
    const auto hi = cold.weight_at(1.0, 1e-12);
    REQUIRE(hi.has_value());
    CHECK(std::abs(hi->real() - kPi) < 1e-12);
    const auto lo = cold.weight_at(-1.0, 1e-12);
    CHECK((!lo.has_value() || lo->real() < 1e-80));

    const auto s = plasma_correlator_spectrum(plasma_model(1.0, 1.0), 1.0);
    REQUIRE(s.size() == 2);
    const double e = std::numbers::e;
    CHECK(std::abs(s.lines()[0].weight.real() - kPi / (e - 1.0)) < 1e-14);
    CHECK(std::abs(s.lines()[1].weight.real() - kPi * e / (e - 1.0)) < 1e-14);
    CHECK(std::abs(s.lines()[0].weight.real() / s.lines()[1].weight.real() - std::exp(-1.0)) < 1e-15);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.05, 5.0);
    for (int i = 0; i < 50; ++i) {
        const double beta = u(rng);
        const auto sp = plasma_correlator_spectrum(plasma_model(u(rng), u(rng)), beta);
        CHECK(sp.positive());
        for (const auto& l : sp.lines()) {
            CHECK(l.weight.real() > 0.0);
            CHECK(l.weight.imag() == 0.0);
        }
        const double wp = sp.lines()[1].frequency;
        CHECK(std::abs(sp.lines()[0].weight.real() / sp.lines()[1].weight.real() - std::exp(-beta * wp)) <
              1e-13);
    }
    CHECK_THROWS_AS(plasma_correlator_spectrum(plasma_model(1.0, 1.0), 0.0), Error);
}

TEST_CASE("Drude decomposition with the 3-4-5 triple")
{
    const auto m = drude_model(1.0, 1.0, 0.6);
    const auto d = drude_decomposition(m, {0.3, 0.2});
    REQUIRE(d.catalog.poles.size() == 3);
    int lhp = 0, origin = 0;
    for (const auto& p : d.catalog.poles) {
        if (p.cls == PoleClass::LowerHalfPlane) {
            ++lhp;
            CHECK(std::abs(std::abs(p.location.real()) - 0.8) < 1e-15);
            CHECK(std::abs(p.location.imag() + 0.6) < 1e-15);
        } else if (p.cls == PoleClass::Origin) {
            ++origin;
            CHECK(p.location == cplx(0.0, 0.0));
        }
    }
    CHECK(lhp == 2);
    CHECK(origin == 1);
    CHECK(std::abs(d.total - (d.g1 + d.g2)) == 0.0);
}

TEST_CASE("catalog residues match the rational function")
{
    const auto m = drude_model(1.7, 1.0, 0.25);
    const auto cat = pole_catalog(m);
    const double g2 = 2.0 * 0.25;
    // G = g (w + 2 i gamma) / (w (w^2 + 2 i gamma w - wp^2))
    for (const auto& p : cat.poles) {
        const cplx w = p.location;
        const cplx num = m.g * (w + cplx(0.0, g2));
        const cplx dden = 3.0 * w * w + 2.0 * cplx(0.0, g2) * w - 1.0;
        CHECK(std::abs(p.residue - num / dden) < 1e-13);
    }
    const auto cp = pole_catalog(plasma_model(1.7, 1.3));
    for (const auto& p : cp.poles)
        CHECK(std::abs(p.residue - 1.7 / (2.0 * p.location)) < 1e-15);
}

TEST_CASE("partial fractions reproduce the Drude Green function")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const auto m = drude_model(1.0, 1.0, 0.15);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const cplx w(u(rng), u(rng));
        const auto d = drude_decomposition(m, w);
        const cplx ref = direct_green(m, w);
        worst = std::max(worst, std::abs(d.g1 + d.g2 - ref) / std::abs(ref));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("the second term vanishes as gamma goes to zero")
{
    const cplx w(0.7, 0.3);
    const cplx gp = direct_green(plasma_model(1.0, 1.0), w);
    double prev = 1.0;
    for (double g = 1e-2; g > 1e-6; g /= 10.0) {
        const auto d = drude_decomposition(drude_model(1.0, 1.0, g), w);
        CHECK(std::abs(d.g2) < prev);
        prev = std::abs(d.g2);
        CHECK(std::abs(d.g1 - gp) < 20.0 * g);
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("poles approach the plasma poles")
{
    for (double g : {0.1, 0.01, 0.001}) {
        const auto cat = pole_catalog(drude_model(1.0, 1.0, g));
        for (const auto& p : cat.poles) {
            if (p.cls != PoleClass::LowerHalfPlane)
                continue;
            const double target = p.location.real() > 0 ? 1.0 : -1.0;
            CHECK(std::abs(p.location - cplx(target, 0.0)) <= g + g * g);
        }
    }
}

TEST_CASE("degenerate and mismatched models")
{
    CHECK_THROWS_AS(drude_decomposition(drude_model(1.0, 1.0, 1.0), {0.3, 0.1}), Error);
    try {
        drude_decomposition(drude_model(1.0, 1.0, 1.5), {0.3, 0.1});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateModel);
    }
    CHECK_THROWS_AS(drude_decomposition(plasma_model(1.0, 1.0), {0.3, 0.1}), Error);
    CHECK_THROWS_AS(toy_green(plasma_model(1.0, 1.0), {1.0, 0.0}), Error);
}

TEST_CASE("FDT compatibility verdicts")
{
    const auto p = fdt_compatibility_report(plasma_model(1.0, 1.0), 1.0);
    CHECK(p.verdict == FdtVerdict::Compatible);
    CHECK(p.im_part_real_comb);
    CHECK(p.positive_spectrum_constructible);

    const auto d = fdt_compatibility_report(drude_model(1.0, 1.0, 0.01), 1.0);
    CHECK(d.verdict == FdtVerdict::Incompatible);
    CHECK(d.reasons.size() >= 2);

    const auto d0 = fdt_compatibility_report(drude_model(1.0, 1.0, 0.0), 1.0);
    CHECK(d0.verdict == FdtVerdict::Compatible);
    CHECK(to_string(FdtVerdict::Incompatible) == "Incompatible");
}
