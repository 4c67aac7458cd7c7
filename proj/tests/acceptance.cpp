#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lifshitz/casimir.hpp"
#include "lifshitz/errors.hpp"
#include "lifshitz/fdt_lab.hpp"
#include "lifshitz/response.hpp"
#include "random_systems.hpp"

using namespace lifshitz;
using testing_support::random_hermitian;
using testing_support::remove_static_part;

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    std::array<char, 512> buf{};
    std::snprintf(buf.data(), buf.size(), f, args...);
    return buf.data();
}

CavityConfig plasma_cavity(double a, Polarization s = Polarization::TM)
{
    CavityConfig c;
    c.half_gap = a;
    c.sigma = s;
    return c;
}

Outcome fdt_exactness()
{
    const auto two = QuantumSystem::two_level(1.0, 1.0);
    const auto r = fdt_verify(two, two.observable_index("sx"));
    double worst = std::max(std::abs(r.lhs - 1.0), std::abs(r.rhs - 1.0));
    worst = std::max(worst, r.abs_error);

    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> dim(2, 8);
    std::uniform_real_distribution<double> beta(0.05, 5.0);
    double worst_random = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        const int n = dim(rng);
        const Matrix h = random_hermitian(n, rng);
        const QuantumSystem sys(h, {{"A", remove_static_part(h, random_hermitian(n, rng))}}, beta(rng));
        worst_random = std::max(worst_random, fdt_verify(sys, 0).abs_error);
    }
    return {worst < 1e-10 && worst_random < 1e-10,
            fmt("two-level sx lhs=%.15f rhs=%.15f; 100 random systems max |lhs-rhs|=%.3e", r.lhs, r.rhs,
                worst_random)};
}

Outcome oscillator_oracle()
{
    const int n = 40;
    bool pass = true;
    std::ostringstream d;
    for (double bw : {0.5, 1.0, 5.0}) {
        const auto sys = QuantumSystem::harmonic_oscillator(n, 1.0, 1.0, bw);
        const double lhs = fdt_verify(sys, sys.observable_index("x")).lhs;
        const double infinite = 0.5 / std::tanh(0.5 * bw);
        // closed form of the truncated ladder: the top level misses its upward matrix element
        double z = 0.0, s = 0.0, top = 0.0;
        for (int k = 0; k < n; ++k) {
            const double p = std::exp(-bw * k);
            z += p;
            s += p * (2.0 * k + 1.0);
            top = p;
        }
        const double truncated = 0.5 * (s - top * n) / z;
        const double err = std::abs(lhs - infinite);
        pass = pass && err < 1e-8;
        d << fmt("bw=%g |<x2>-coth form|=%.3e truncation_gap=%.3e |<x2>-truncated form|=%.1e; ", bw, err,
                 std::abs(infinite - truncated), std::abs(lhs - truncated));
    }
    return {pass, d.str()};
}

Outcome kms_and_symmetries()
{
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> dim(2, 8);
    std::uniform_real_distribution<double> beta(0.05, 5.0);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double kms = 0.0, conj_sym = 0.0, time_sym = 0.0, freq_sym = 0.0, reality = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        const int n = dim(rng);
        const QuantumSystem sys(random_hermitian(n, rng),
                                {{"A", random_hermitian(n, rng)}, {"B", random_hermitian(n, rng)}}, beta(rng));
        kms = std::max({kms, kms_check(sys, 0, 1).max_ratio_error, kms_check(sys, 0, 0).max_ratio_error});
        const double tol = line_merge_tolerance(sys);
        const auto jab = correlator_line_spectrum(sys, 0, 1);
        const auto jba = reversed_correlator_line_spectrum(sys, 0, 1);
        for (const auto& l : jab.lines())
            conj_sym = std::max(conj_sym, std::abs(l.weight - std::conj(jba.weight_at(-l.frequency, tol).value_or(0.0))));
        const double t = std::abs(u(rng));
        const cd gr = retarded_green_time(sys, 0, 1, t);
        time_sym = std::max(time_sym, std::abs(gr - advanced_green_time(sys, 1, 0, -t)));
        reality = std::max(reality, std::abs(gr.imag()));
        const cd z(u(rng), 0.1 + std::abs(u(rng)));
        const cd g = retarded_green_eval(sys, 0, 1, z);
        freq_sym = std::max(freq_sym, std::abs(g - advanced_green_eval(sys, 1, 0, -z)));
        freq_sym = std::max(freq_sym, std::abs(std::conj(g) - retarded_green_eval(sys, 0, 1, -std::conj(z))));
    }
    const double worst = std::max({kms, conj_sym, time_sym, freq_sym, reality});
    return {worst < 1e-10, fmt("100 draws: KMS %.2e, J_ij(w)=conj Jrev_ij(-w) %.2e, G^r(t)=G^a(-t) %.2e, "
                               "G(w) symmetries %.2e, real kernel %.2e",
                               kms, conj_sym, time_sym, freq_sym, reality)};
}

Outcome linear_response()
{
    Matrix sx(2, 2), sz(2, 2);
    sx << 0.0, 1.0, 1.0, 0.0;
    sz << 1.0, 0.0, 0.0, -1.0;
    const QuantumSystem sys(0.5 * sz, {{"A", sx + 0.5 * sz}}, 1.0);
    DrivingProtocol d;
    d.amplitude = 1e-2;
    d.switch_rate = 0.05;
    d.forces.push_back({0, [](double t) { return std::cos(0.7 * t); }});
    const auto s = check_quadratic_scaling(sys, d, 20.0);
    return {s.passed, fmt("F0=%g,%g,%g max errors %.3e,%.3e,%.3e ratios %.3f,%.3f", s.amplitudes[0],
                          s.amplitudes[1], s.amplitudes[2], s.max_errors[0], s.max_errors[1], s.max_errors[2],
                          s.ratios[0], s.ratios[1])};
}

Outcome pole_structure()
{
    ToyGreenModel plasma;
    plasma.g = 1.3;
    plasma.dispersion = DispersionModel::plasma(1.2);
    ToyGreenModel drude;
    drude.g = 1.3;
    drude.dispersion = DispersionModel::drude(1.2, 0.3);

    double loc = 0.0;
    const auto pc = pole_catalog(plasma);
    std::vector<cd> expected_p{{-1.2, 0.0}, {1.2, 0.0}};
    for (const auto& e : expected_p) {
        double best = 1e300;
        for (const auto& p : pc.poles)
            best = std::min(best, std::abs(p.location - e));
        loc = std::max(loc, best);
    }
    const double wt = std::sqrt(1.44 - 0.09);
    const auto dc = pole_catalog(drude);
    std::vector<cd> expected_d{{-wt, -0.3}, {wt, -0.3}, {0.0, 0.0}};
    for (const auto& e : expected_d) {
        double best = 1e300;
        for (const auto& p : dc.poles)
            best = std::min(best, std::abs(p.location - e));
        loc = std::max(loc, best);
    }
    const bool counts = pc.poles.size() == 2 && dc.poles.size() == 3;

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double pf = 0.0;
    for (int i = 0; i < 100; ++i) {
        const cd w(u(rng), u(rng));
        const auto dd = drude_decomposition(drude, w);
        // g / (w^2 eps(w)) written out directly
        const cd ref = drude.g * (w + cd(0.0, 0.6)) / (w * (w * w + cd(0.0, 0.6) * w - 1.44));
        pf = std::max(pf, std::abs(dd.g1 + dd.g2 - ref) / std::abs(ref));
    }
    const auto vp = fdt_compatibility_report(plasma, 1.0).verdict;
    const auto vd = fdt_compatibility_report(drude, 1.0).verdict;
    const bool verdicts = vp == FdtVerdict::Compatible && vd == FdtVerdict::Incompatible;
    return {counts && loc < 1e-12 && pf < 1e-12 && verdicts,
            fmt("pole locations max dev %.2e, partial fractions max rel dev %.2e at 100 probes, verdicts "
                "plasma=%s drude=%s",
                loc, pf, to_string(vp).c_str(), to_string(vd).c_str())};
}

Outcome contour_rotation()
{
    bool pass = true;
    double worst_rel = 0.0;
    int checked = 0;
    for (auto s : {Polarization::TE, Polarization::TM}) {
        for (double k : {0.5, 1.0, 2.0}) {
            for (double a : {0.25, 0.5, 1.0}) {
                const auto c = plasma_cavity(a, s);
                const auto kp = KPoint::make(k, c.model);
                const auto r = energy_real_axis_per_k(c, kp, 1000.0 * kp.omega_plus);
                pass = pass && r.passed;
                worst_rel = std::max(worst_rel, r.mismatch / std::abs(r.imaginary_axis_part));
                ++checked;
            }
        }
    }
    return {pass, fmt("%d (sigma,k,a) points, max relative mismatch %.2e", checked, worst_rel)};
}

Outcome matsubara_route()
{
    const auto c = plasma_cavity(1.0);
    const double e = energy_imaginary_axis(c).value;
    std::vector<double> errs;
    for (double beta : {50.0, 100.0, 200.0})
        errs.push_back(std::abs(free_energy_matsubara(c, {1.0 / beta, 0, 1e-12}).value / e - 1.0));
    const bool monotone = errs[0] > errs[1] && errs[1] > errs[2];

    const double t = 2.0;
    double single = 0.0;
    for (auto s : {Polarization::TE, Polarization::TM}) {
        const auto cs = c.with_sigma(s);
        quad::QuadOptions o;
        o.abs_tol = 1e-300;
        o.rel_tol = 1e-10;
        single += t * MatsubaraGrid::m0_weight *
                  quad::integrate_semi_infinite(
                      [&](double k) { return k / (2.0 * kPi) * matsubara_zero_term(cs, k); }, 0.0, 0.25, o)
                      .value;
    }
    const double f = free_energy_matsubara(c, {t, 0, 1e-12}).value;
    const double high = std::abs(f / single - 1.0);
    return {monotone && errs[2] <= 1e-3 && high < 0.01,
            fmt("rel err vs E at hbar wp/kT=50,100,200: %.3e,%.3e,%.3e; T=2 single m=0 term dev %.3e", errs[0],
                errs[1], errs[2], high)};
}

Outcome ideal_metal()
{
    auto ideal_e = [](double l) { return -kPi * kPi / (720.0 * l * l * l); };
    auto ideal_p = [](double l) { return -kPi * kPi / (240.0 * l * l * l * l); };
    const double a = 50.0;
    const double l = 2.0 * a;
    const double re = energy_imaginary_axis(plasma_cavity(a)).value / ideal_e(l);
    const double rp = casimir_pressure(plasma_cavity(a)).value / ideal_p(l);
    std::vector<double> scaled;
    for (double aa : {50.0, 100.0, 200.0}) {
        const double ll = 2.0 * aa;
        scaled.push_back(std::abs(energy_imaginary_axis(plasma_cavity(aa)).value) * ll * ll * ll);
    }
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    const double spread = *hi / *lo - 1.0;
    const bool pe = std::abs(re - 1.0) < 0.05;
    const bool pp = std::abs(rp - 1.0) < 0.05;
    const bool ps = spread < 0.05;
    return {pe && pp && ps,
            fmt("E/E_ideal=%.5f (%s), P/P_ideal=%.5f (%s), E*(2a)^3 spread over a=50..200 %.4f (%s)", re,
                pe ? "ok" : "fail", rp, pp ? "ok" : "fail", spread, ps ? "ok" : "fail")};
}

Outcome analyticity()
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_real_distribution<double> pos(0.05, 3.0);
    bool decay = true;
    double even_p = 0.0, even_d = 0.0, im_axis = 0.0;
    int winding = 0;
    for (auto s : {Polarization::TE, Polarization::TM}) {
        const auto cp = plasma_cavity(1.0, s);
        CavityConfig cdr = cp;
        cdr.model = DispersionModel::drude(1.0, 0.1);
        const auto kp = KPoint::make(0.7, cp.model);
        for (const CavityConfig* c : std::array<const CavityConfig*, 2>{&cp, &cdr}) {
            for (double ang : {0.2, kPi / 2.0, 2.9}) {
                double prev = 1e300;
                for (double r : {10.0, 30.0, 100.0}) {
                    const double dev = std::abs(dispersion_function(std::polar(r, ang), *c, kp) - 1.0);
                    decay = decay && dev < prev;
                    prev = dev;
                }
            }
            winding = std::max(winding, std::abs(uhp_winding_number(*c, kp, {0.1, 3.0, 0.1, 3.0}).count));
        }
        for (int i = 0; i < 1000; ++i) {
            const auto kpr = KPoint::make(pos(rng), cp.model);
            const cd w(u(rng), u(rng));
            even_p = std::max(even_p, std::abs(dispersion_function(w, cp, kpr) - dispersion_function(-w, cp, kpr)));
            const double z = pos(rng);
            im_axis = std::max({im_axis, std::abs(dispersion_function({0.0, z}, cp, kpr).imag()),
                                std::abs(dispersion_function({0.0, z}, cdr, kpr).imag())});
            const double wr = pos(rng);
            if (std::abs(wr - kpr.omega_minus) > 1e-6)
                even_d = std::max(even_d, std::abs(dispersion_function({wr, 0.0}, cdr, kpr) -
                                                   dispersion_function({-wr, 0.0}, cdr, kpr)));
        }
    }
    return {decay && even_p < 1e-12 && even_d > 1e-6 && im_axis < 1e-12 && winding == 0,
            fmt("|D-1| decreasing at |w|=10,30,100: %s; plasma even %.2e; Drude odd part %.2e; Im D(i zeta) "
                "%.2e; UHP winding max |n| = %d",
                decay ? "yes" : "no", even_p, even_d, im_axis, winding)};
}

Outcome anomaly()
{
    CavityConfig c;
    c.half_gap = 1.0;
    c.model = DispersionModel::drude(1.0, 0.0);
    const auto zero = drude_anomaly(c, 0.1, 20);
    bool pass = zero.value == cd(0.0, 0.0);
    std::ostringstream d;
    d << fmt("gamma=0 dF=%g%+gi; ", zero.value.real(), zero.value.imag());
    for (double g : {1e-3, 1e-2, 1e-1}) {
        c.model = DispersionModel::drude(1.0, g);
        const auto r = drude_anomaly(c, 0.1, 20);
        const bool ok = std::abs(r.value) > 10.0 * r.noise_floor &&
                        std::abs(r.value.real()) < 1e-10 * std::abs(r.value);
        pass = pass && ok;
        d << fmt("gamma=%g dF=%.3e%+.3ei noise %.1e; ", g, r.value.real(), r.value.imag(), r.noise_floor);
    }
    return {pass, d.str()};
}

std::string run_capture(const std::string& cmd)
{
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p)
        return out;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0)
        out.append(buf.data(), n);
    const int status = pclose(p);
    if (status != 0)
        out += "\n<exit " + std::to_string(status) + ">";
    return out;
}

Outcome determinism()
{
    const char* cli = std::getenv("LIFSHITZ_CLI");
    if (!cli)
        return {false, "LIFSHITZ_CLI is not set"};
    const std::string exe = cli;
    const std::vector<std::string> invocations{
        exe + " energy --model drude --gamma 0.1 --a 1",
        exe + " free-energy --model plasma --a 1 --T 0.05",
        exe + " fdt-check --preset two-level --beta 1",
        exe + " poles --model drude --gamma 0.2",
        exe + " spectrum --sigma TM --k 1 --a 1",
        exe + " anomaly --gamma 0.1 --T 0.1 --a 1 --m-max 5",
    };
    int same = 0;
    for (const auto& cmd : invocations) {
        const std::string a = run_capture(cmd + " 2>/dev/null");
        const std::string b = run_capture(cmd + " 2>/dev/null");
        if (!a.empty() && a == b && a.find("<exit") == std::string::npos)
            ++same;
    }
    return {same == static_cast<int>(invocations.size()),
            fmt("%d of %zu invocations byte-identical across two runs", same, invocations.size())};
}

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<std::function<Outcome()>> criteria{
        fdt_exactness, oscillator_oracle, kms_and_symmetries, linear_response, pole_structure, contour_rotation,
        matsubara_route, ideal_metal, analyticity, anomaly, determinism};
    std::vector<int> which;
    for (int i = 1; i < argc; ++i)
        which.push_back(std::atoi(argv[i]));
    if (which.empty())
        for (int i = 1; i <= static_cast<int>(criteria.size()); ++i)
            which.push_back(i);

    bool all = true;
    for (int n : which) {
        if (n < 1 || n > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "unknown criterion %d\n", n);
            return 2;
        }
        Outcome o;
        try {
            o = criteria[static_cast<std::size_t>(n - 1)]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %d: %s %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
