#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lifshitz/errors.hpp"
#include "lifshitz/units.hpp"

using namespace lifshitz;

TEST_CASE("internal units")
{
    const auto u = UnitSystem::internal();
    CHECK(u.hbar == 1.0);
    CHECK(u.c == 1.0);
    CHECK(u.k_B == 1.0);
    CHECK(u.length_si() == 0.0);
}

TEST_CASE("SI conversions reproduce the ideal-metal pressure at one micron")
{
    const double wp = 1.37e16;
    const auto u = UnitSystem::with_plasma_frequency(wp);
    CHECK(u.length_si() == doctest::Approx(si::c / wp));
    const double d = 1e-6;
    const double l = d / u.length_si();
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double p_internal = -pi2 / (240.0 * l * l * l * l);
    const double p_si = p_internal * u.pressure_si();
    CHECK(p_si == doctest::Approx(-pi2 * si::hbar * si::c / (240.0 * d * d * d * d)).epsilon(1e-12));
    CHECK(p_si == doctest::Approx(-1.3e-3).epsilon(0.01));
    const double e_internal = -pi2 / (720.0 * l * l * l);
    CHECK(e_internal * u.energy_per_area_si() ==
          doctest::Approx(-pi2 * si::hbar * si::c / (720.0 * d * d * d)).epsilon(1e-12));
    CHECK(u.temperature_si() == doctest::Approx(si::hbar * wp / si::k_B));
    CHECK_THROWS_AS(UnitSystem::with_plasma_frequency(0.0), Error);
}
