#include <cmath>
#include <random>

#include "doctest.h"
#include "lifshitz/errors.hpp"
#include "lifshitz/fdt_lab.hpp"
#include "random_systems.hpp"

using namespace lifshitz;

namespace {

using cd = std::complex<double>;

QuantumSystem mixed_two_level(double beta)
{
    Matrix sx(2, 2), sz(2, 2);
    sx << 0.0, 1.0, 1.0, 0.0;
    sz << 1.0, 0.0, 0.0, -1.0;
    return QuantumSystem(0.5 * sz, {{"A", sx + 0.5 * sz}}, beta);
}

DrivingProtocol cosine_drive(double amplitude, std::size_t channel, double omega)
{
    DrivingProtocol d;
    d.amplitude = amplitude;
    d.switch_rate = 0.05;
    d.forces.push_back({channel, [omega](double t) { return std::cos(omega * t); }});
    return d;
}

}  // namespace

TEST_CASE("zero amplitude gives zero response")
{
    const auto sys = mixed_two_level(1.0);
    const auto r = linear_response_sim(sys, cosine_drive(0.0, 0, 0.7), 10.0);
    for (double v : r.delta_A_direct)
        CHECK(v == 0.0);
    CHECK(r.max_error == 0.0);
}

TEST_CASE("direct evolution agrees with the Kubo convolution at small amplitude")
{
    const auto sys = mixed_two_level(1.0);
    const auto r = linear_response_sim(sys, cosine_drive(1e-3, 0, 0.7), 20.0);
    REQUIRE(r.max_abs_response > 0.0);
    // the mismatch is the second-order response, relative size O(F0)
    CHECK(r.max_error / r.max_abs_response < 1e-2);
    CHECK(r.purity_drift < 1e-10);
}

TEST_CASE("mismatch scales quadratically with amplitude")
{
    const auto sys = mixed_two_level(1.0);
    const auto s = check_quadratic_scaling(sys, cosine_drive(1e-2, 0, 0.7), 20.0);
    REQUIRE(s.ratios.size() == 2);
    CHECK(s.passed);
    for (double ratio : s.ratios)
        CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("random system cross-check with two force channels")
{
    std::mt19937_64 rng(5);
    const int n = 4;
    const QuantumSystem sys(testing_support::random_hermitian(n, rng),
                            {{"A", testing_support::random_hermitian(n, rng)},
                             {"B", testing_support::random_hermitian(n, rng)}},
                            0.8);
    DrivingProtocol d = cosine_drive(1e-4, 0, 0.4);
    d.forces.push_back({1, [](double t) { return std::sin(1.3 * t); }});
    LinearResponseOptions o;
    o.response_observable = 1;
    const auto r = linear_response_sim(sys, d, 15.0, o);
    CHECK(r.max_error / r.max_abs_response < 1e-3);
}

TEST_CASE("simulated susceptibility matches -G^r")
{
    const auto sys = mixed_two_level(1.3);
    const double eps = 0.05;
    for (double omega : {0.3, 0.6, 1.4, 2.0, 3.1}) {
        const cd sim = susceptibility_from_simulation(sys, 0, 0, omega, eps, 1e-5, 20.0);
        const cd exact = susceptibility(sys, 0, 0, cd(omega, eps));
        CHECK(std::abs(sim - exact) < 1e-5 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("invalid protocols")
{
    const auto sys = mixed_two_level(1.0);
    DrivingProtocol d = cosine_drive(1e-3, 0, 1.0);
    d.switch_rate = 0.0;
    CHECK_THROWS_AS(linear_response_sim(sys, d, 1.0), Error);
    d = cosine_drive(1e-3, 3, 1.0);
    CHECK_THROWS_AS(linear_response_sim(sys, d, 1.0), Error);
    CHECK_THROWS_AS(linear_response_sim(sys, cosine_drive(1e-3, 0, 1.0), -1.0), Error);
}
