#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lifshitz/cavity.hpp"
#include "lifshitz/errors.hpp"
#include "lifshitz/quad.hpp"

namespace lifshitz {
namespace {

constexpr double kPi = std::numbers::pi;

// interior points of (lo, hi), clustered towards both ends
std::vector<double> clustered_grid(double lo, double hi, int n)
{
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        const double s = static_cast<double>(i) / (n + 1);
        g.push_back(lo + (hi - lo) * 0.5 * (1.0 - std::cos(kPi * s)));
    }
    return g;
}

// (A + B) + sign (A - B) e^{-2 a kappa2}: the two factors of D (A + B)^2 on
// (0, omega_minus). Each carries one mode of the surface pair, so the pair
// stays resolved even when its splitting is below rounding.
double surface_factor(double w, const CavityConfig& c, const KPoint& kp, double sign)
{
    const double w2 = w * w;
    const double kappa1 = std::sqrt(kp.omega_plus * kp.omega_plus - w2);
    const double kappa2 = std::sqrt(std::max(kp.omega_minus * kp.omega_minus - w2, 0.0));
    double a = kappa1;
    double b = kappa2;
    if (c.sigma == Polarization::TM) {
        a = w2 * kappa1;
        b = (w2 - c.model.omega_p * c.model.omega_p) * kappa2;
    }
    return (a + b) + sign * (a - b) * std::exp(-2.0 * c.half_gap * kappa2);
}

// Analytic continuations of D times (k1 + eps k2)^2 off the two real segments,
// used only to count real roots with the argument principle.
cplx surface_continuation(cplx w, const CavityConfig& c, const KPoint& kp)
{
    const cplx w2 = w * w;
    const cplx kappa1 = std::sqrt(kp.omega_plus * kp.omega_plus - w2);
    const cplx kappa2 = std::sqrt(kp.omega_minus * kp.omega_minus - w2);
    cplx a = kappa1;
    cplx b = kappa2;
    if (c.sigma == Polarization::TM) {
        a = w2 * kappa1;
        b = (w2 - c.model.omega_p * c.model.omega_p) * kappa2;
    }
    return (a + b) * (a + b) - (a - b) * (a - b) * std::exp(-4.0 * c.half_gap * kappa2);
}

cplx band_continuation(cplx w, const CavityConfig& c, const KPoint& kp)
{
    const cplx w2 = w * w;
    const cplx k1 = cplx(0.0, 1.0) * std::sqrt(kp.omega_plus * kp.omega_plus - w2);
    const cplx k2 = std::sqrt(w2 - kp.omega_minus * kp.omega_minus);
    const cplx eps = c.sigma == Polarization::TE
                         ? cplx(1.0, 0.0)
                         : 1.0 - c.model.omega_p * c.model.omega_p / w2;
    const cplx p = k1 + eps * k2;
    const cplx m = k1 - eps * k2;
    return p * p - m * m * std::exp(cplx(0.0, 4.0 * c.half_gap) * k2);
}

std::vector<double> surface_roots(const CavityConfig& c, const KPoint& kp, int n)
{
    std::vector<double> roots;
    const std::vector<double> g = clustered_grid(0.0, kp.omega_minus, n);
    for (double sign : {-1.0, 1.0}) {
        auto f = [&](double w) { return surface_factor(w, c, kp, sign); };
        double prev = f(g.front());
        for (std::size_t i = 1; i < g.size(); ++i) {
            const double cur = f(g[i]);
            if (cur == 0.0) {
                roots.push_back(g[i]);
            } else if (prev != 0.0 && std::signbit(prev) != std::signbit(cur)) {
                roots.push_back(quad::find_root_bracketed(f, g[i - 1], g[i]));
            }
            prev = cur;
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<double> waveguide_roots(const CavityConfig& c, const KPoint& kp, int n)
{
    std::vector<double> roots;
    const std::vector<double> g = clustered_grid(kp.omega_minus, kp.omega_plus, n);
    double prev = band_phase(g.front(), c, kp);
    for (std::size_t i = 1; i < g.size(); ++i) {
        const double cur = band_phase(g[i], c, kp);
        const double lo = std::min(prev, cur);
        const double hi = std::max(prev, cur);
        for (long m = static_cast<long>(std::ceil(lo / (2.0 * kPi)));
             2.0 * kPi * static_cast<double>(m) <= hi; ++m) {
            const double target = 2.0 * kPi * static_cast<double>(m);
            auto f = [&](double w) { return band_phase(w, c, kp) - target; };
            if (target == prev)
                continue;  // counted with the previous interval
            roots.push_back(quad::find_root_bracketed(f, g[i - 1], g[i]));
        }
        prev = cur;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

int count_in(const std::vector<double>& roots, double lo, double hi)
{
    return static_cast<int>(
        std::count_if(roots.begin(), roots.end(), [&](double r) { return r > lo && r < hi; }));
}

}  // namespace

ModeSpectrum find_modes(const CavityConfig& config, const KPoint& kp, const ModeOptions& opts)
{
    config.validate();
    if (config.model.kind != ModelKind::Plasma)
        throw Error(ErrorCode::ModelMismatch, "real-axis mode finding requires the plasma model");
    if (!(kp.k > 0.0))
        throw Error(ErrorCode::DomainError, "mode finding requires k > 0");

    ModeSpectrum ms;
    ms.kpoint = kp;
    ms.sigma = config.sigma;
    ms.half_gap = config.half_gap;
    if (auto pole = reflection_pole(config, kp))
        ms.reflection_poles.push_back(*pole);

    const double wm = kp.omega_minus;
    const double wpl = kp.omega_plus;
    // thin rectangles: height h, kept a distance h from the segment ends
    const double hs = 1e-6 * wm;
    const double hb = 1e-6 * (wpl - wm);

    int n = opts.grid_points;
    for (int attempt = 0;; ++attempt) {
        ms.surface_modes = surface_roots(config, kp, n);
        ms.waveguide_modes = waveguide_roots(config, kp, n);
        if (!opts.cross_check)
            break;
        const WindingResult ws = winding_number(
            [&](cplx w) { return surface_continuation(w, config, kp); },
            {0.0, wm - hs, -hs, hs});
        const WindingResult wb = winding_number(
            [&](cplx w) { return band_continuation(w, config, kp); },
            {wm + hb, wpl - hb, -hb, hb});
        ms.surface_winding = ws.count;
        ms.waveguide_winding = wb.count;
        const bool ok = ws.count == count_in(ms.surface_modes, 0.0, wm - hs) &&
                        wb.count == count_in(ms.waveguide_modes, wm + hb, wpl - hb);
        if (ok)
            break;
        if (attempt >= opts.refinements) {
            std::ostringstream msg;
            msg << "root count mismatch at k = " << kp.k << ": argument principle gives "
                << ws.count << " surface / " << wb.count << " waveguide, bracketing found "
                << ms.surface_modes.size() << " / " << ms.waveguide_modes.size();
            throw Error(ErrorCode::UnresolvedRoot, msg.str());
        }
        n *= 4;
    }

    for (double w : ms.surface_modes)
        ms.max_residual = std::max(ms.max_residual, std::abs(dispersion_function(w, config, kp)));
    for (double w : ms.waveguide_modes)
        ms.max_residual = std::max(ms.max_residual, std::abs(dispersion_function(w, config, kp)));

    ms.omega_cut = opts.omega_cut_factor * wpl;
    ms.phase_curve = sample_phase_shift(config, kp, wpl, ms.omega_cut, 200);
    return ms;
}

std::vector<PhaseSample> sample_phase_shift(const CavityConfig& config, const KPoint& kp, double lo,
                                            double hi, int initial_points)
{
    if (!(lo >= kp.omega_plus && hi > lo))
        throw Error(ErrorCode::DomainError, "phase samples need omega_plus <= lo < hi");
    auto principal = [&](double w) {
        return w == kp.omega_plus ? continuum_phase_shift_at_edge(config, kp)
                                  : continuum_phase_shift(w, config, kp);
    };
    // uniform in k2, the variable in which the phase oscillates
    const double k = kp.omega_minus;
    const double q_lo = std::sqrt(std::max(lo * lo - k * k, 0.0));
    const double q_hi = std::sqrt(hi * hi - k * k);
    const double periods = (q_hi - q_lo) * 2.0 * config.half_gap / kPi;
    const int n = std::max(initial_points, static_cast<int>(std::ceil(periods * 16.0)));

    std::vector<PhaseSample> out;
    out.push_back({lo, principal(lo)});
    for (int i = 1; i <= n; ++i) {
        const double q = q_lo + (q_hi - q_lo) * i / n;
        double w = std::sqrt(q * q + k * k);
        if (i == n)
            w = hi;
        // bisect the step until every jump is below pi/4 (pi/2 is the hard limit)
        std::vector<double> pending{w};
        int depth = 0;
        while (!pending.empty()) {
            const double target = pending.back();
            const PhaseSample& last = out.back();
            const double raw = principal(target);
            const double unwrapped = raw + 2.0 * kPi * std::round((last.delta - raw) / (2.0 * kPi));
            if (std::abs(unwrapped - last.delta) < kPi / 4.0) {
                out.push_back({target, unwrapped});
                pending.pop_back();
                depth = 0;
                continue;
            }
            if (++depth > 40 || target - last.omega < 1e-14 * target) {
                if (std::abs(unwrapped - last.delta) < kPi / 2.0) {
                    out.push_back({target, unwrapped});
                    pending.pop_back();
                    depth = 0;
                    continue;
                }
                std::ostringstream msg;
                msg << "phase jump of " << unwrapped - last.delta << " near omega = " << target
                    << " cannot be resolved by refinement";
                throw Error(ErrorCode::UnwrapError, msg.str());
            }
            pending.push_back(0.5 * (last.omega + target));
        }
    }
    return out;
}

double spectral_density_shift(const CavityConfig& config, const KPoint& kp, double omega)
{
    config.validate();
    if (config.model.kind != ModelKind::Plasma)
        throw Error(ErrorCode::ModelMismatch, "spectral density shift requires the plasma model");
    if (!(omega > kp.omega_plus))
        throw Error(ErrorCode::DomainError, "spectral density shift needs omega > omega_plus");
    const double center = continuum_phase_shift(omega, config, kp);
    auto delta = [&](double w) {
        const double raw = continuum_phase_shift(w, config, kp);
        return raw + 2.0 * kPi * std::round((center - raw) / (2.0 * kPi));
    };
    const double k2 = std::sqrt(omega * omega - kp.omega_minus * kp.omega_minus);
    const double period = kPi / (2.0 * config.half_gap) * omega / k2;
    const double h0 = 0.25 * std::min(omega - kp.omega_plus, 0.1 * period);
    return quad::differentiate_richardson(delta, omega, h0).value / kPi;
}

}  // namespace lifshitz
