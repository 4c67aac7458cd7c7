#include <cmath>

#include "doctest.h"
#include "lifshitz/casimir.hpp"
#include "lifshitz/errors.hpp"

using namespace lifshitz;

namespace {

CavityConfig drude_cavity(double gamma)
{
    CavityConfig c;
    c.half_gap = 1.0;
    c.model = DispersionModel::drude(1.0, gamma);
    return c;
}

}  // namespace

TEST_CASE("no anomaly without damping")
{
    const auto r = drude_anomaly(drude_cavity(0.0), 0.1, 20);
    CHECK(r.value == std::complex<double>(0.0, 0.0));
    for (const auto& s : r.partial_sums)
        CHECK(s == std::complex<double>(0.0, 0.0));
}

TEST_CASE("anomaly is nonzero and purely imaginary")
{
    for (double gamma : {1e-3, 1e-2, 1e-1}) {
        const auto r = drude_anomaly(drude_cavity(gamma), 0.1, 20);
        REQUIRE(r.partial_sums.size() == 20);
        REQUIRE(r.term_magnitudes.size() == 20);
        CHECK(r.partial_sums.back() == r.value);
        CHECK(std::abs(r.value) > 10.0 * r.noise_floor);
        CHECK(std::abs(r.value.real()) < 1e-10 * std::abs(r.value));
        CHECK(r.noise_floor > 0.0);
    }
}

TEST_CASE("partial sums settle for strong damping")
{
    const auto r = drude_anomaly(drude_cavity(0.1), 0.1, 80);
    CHECK(r.converged);
    CHECK(r.tail_estimate <= 0.1 * std::abs(r.value));
}

TEST_CASE("weak damping needs many more terms")
{
    AnomalyOptions o;
    o.throw_on_divergence = true;
    try {
        drude_anomaly(drude_cavity(1e-3), 0.1, 20, o);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OscillatoryDivergence);
    }
}

TEST_CASE("anomaly input validation")
{
    CavityConfig plasma;
    try {
        drude_anomaly(plasma, 0.1, 10);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ModelMismatch);
    }
    CHECK_THROWS_AS(drude_anomaly(drude_cavity(0.1), 0.0, 10), Error);
    CHECK_THROWS_AS(drude_anomaly(drude_cavity(0.1), 0.1, 0), Error);
}
