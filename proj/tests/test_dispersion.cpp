#include <cmath>
#include <random>

#include "doctest.h"
#include "lifshitz/dispersion.hpp"
#include "lifshitz/errors.hpp"

using namespace lifshitz;

TEST_CASE("permittivity examples")
{
    const auto p = DispersionModel::plasma(1.0);
    CHECK(std::abs(eval_permittivity(p, {1.0, 0.0})) == 0.0);
    CHECK(std::abs(eval_permittivity(p, {2.0, 0.0}) - cplx(0.75, 0.0)) < 1e-15);
    const auto d = DispersionModel::drude(1.0, 0.1);
    CHECK(std::abs(eval_permittivity(d, {0.0, 1.0}) - cplx(1.0 + 1.0 / 1.2, 0.0)) < 1e-14);
}

TEST_CASE("permittivity poles and invalid models")
{
    CHECK_THROWS_AS(eval_permittivity(DispersionModel::plasma(), {0.0, 0.0}), Error);
    const auto d = DispersionModel::drude(1.0, 0.3);
    CHECK_THROWS_AS(eval_permittivity(d, {0.0, -0.6}), Error);
    try {
        eval_permittivity(d, {0.0, 0.0});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DomainError);
    }
    CHECK_THROWS_AS(DispersionModel::plasma(0.0), Error);
    CHECK_THROWS_AS(DispersionModel::drude(1.0, -0.1), Error);
}

TEST_CASE("plasma ignores gamma")
{
    DispersionModel p{ModelKind::Plasma, 1.0, 0.7};
    CHECK(p.effective_gamma() == 0.0);
    CHECK(eval_permittivity(p, {0.3, 0.2}) == eval_permittivity(DispersionModel::plasma(), {0.3, 0.2}));
}

std::vector<cplx> random_probes(int n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<cplx> out;
    for (int i = 0; i < n; ++i)
        out.emplace_back(u(rng), u(rng));
    return out;
}

TEST_CASE("symmetry reports")
{
    const auto probes = random_probes(100, 1);
    const auto rp = symmetry_report(DispersionModel::plasma(), probes);
    CHECK(rp.even_in_omega);
    CHECK(rp.real_on_imaginary_axis);
    CHECK(rp.max_violation < 1e-14);

    std::vector<cplx> real_probes;
    for (int i = 1; i <= 20; ++i)
        real_probes.emplace_back(0.2 * i, 0.0);
    const auto rd = symmetry_report(DispersionModel::drude(1.0, 0.1), real_probes);
    CHECK_FALSE(rd.even_in_omega);
    CHECK(rd.real_on_imaginary_axis);
    // by hand at w = 1: eps(1) - eps(-1) = -1/(1+0.2i) + 1/(1-0.2i) = 0.4i / 1.04
    const cplx d = eval_permittivity(DispersionModel::drude(1.0, 0.1), {1.0, 0.0}) -
                   eval_permittivity(DispersionModel::drude(1.0, 0.1), {-1.0, 0.0});
    CHECK(std::abs(d - cplx(0.0, 0.4 / 1.04)) < 1e-14);

    const auto r0 = symmetry_report(DispersionModel::drude(1.0, 0.0), probes);
    CHECK(r0.even_in_omega == rp.even_in_omega);
    CHECK(r0.real_on_imaginary_axis == rp.real_on_imaginary_axis);
    CHECK(r0.max_violation == rp.max_violation);
}

TEST_CASE("reality of the response at every probe")
{
    for (const auto& m : {DispersionModel::plasma(), DispersionModel::drude(1.0, 0.2)}) {
        const auto r = symmetry_report(m, random_probes(200, 3));
        CHECK(r.reality_violation < 1e-12);
    }
}

TEST_CASE("Drude on the imaginary axis is real and above one")
{
    for (double g : {0.0, 0.01, 0.1, 1.0, 5.0}) {
        const auto d = DispersionModel::drude(1.0, g);
        for (double z = 1e-3; z < 100.0; z *= 1.7) {
            const cplx e = eval_permittivity(d, {0.0, z});
            CHECK(e.imag() == 0.0);
            CHECK(e.real() > 1.0);
        }
    }
}

TEST_CASE("Drude approaches plasma linearly in gamma")
{
    const cplx w(0.7, 0.4);
    const cplx ep = eval_permittivity(DispersionModel::plasma(), w);
    double prev = 0.0;
    for (double g = 1e-3; g > 1e-6; g /= 2.0) {
        const double err = std::abs(eval_permittivity(DispersionModel::drude(1.0, g), w) - ep);
        if (prev > 0.0)
            CHECK(std::abs(prev / err - 2.0) < 0.01);
        prev = err;
    }
}

TEST_CASE("model names")
{
    CHECK(parse_model_kind("plasma") == ModelKind::Plasma);
    CHECK(parse_model_kind("drude") == ModelKind::Drude);
    CHECK(to_string(ModelKind::Drude) == "drude");
    CHECK_THROWS_AS(parse_model_kind("lorentz"), Error);
}
