#include "lifshitz/casimir.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lifshitz/errors.hpp"
#include "lifshitz/quad.hpp"

namespace lifshitz {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// eps(i zeta) zeta^2 - zeta^2, the part of kappa1^2 - kappa2^2 set by the metal
double plasma_excess(double zeta, const DispersionModel& m)
{
    const double wp2 = m.omega_p * m.omega_p;
    if (m.kind == ModelKind::Plasma)
        return wp2;
    return wp2 * zeta / (zeta + 2.0 * m.gamma);
}

// r^2 e^{-4 a kappa2} on the imaginary axis
double round_trip(double zeta, double k, const CavityConfig& c)
{
    if (!(zeta >= 0.0) || !(k >= 0.0))
        throw Error(ErrorCode::DomainError, "imaginary-axis formulas need zeta >= 0 and k >= 0");
    const double excess = plasma_excess(zeta, c.model);
    const double z2 = zeta * zeta;
    const double kappa2 = std::sqrt(z2 + k * k);
    const double kappa1 = std::sqrt(z2 + excess + k * k);
    double r;
    if (c.sigma == Polarization::TE) {
        r = -excess / ((kappa1 + kappa2) * (kappa1 + kappa2));
    } else {
        const double eps_z2 = z2 + excess;
        const double den = z2 * kappa1 + eps_z2 * kappa2;
        if (den == 0.0)
            throw Error(ErrorCode::DomainError, "TM reflection undefined at zeta = 0 and k = 0");
        r = (z2 * kappa1 - eps_z2 * kappa2) / den;
    }
    return r * r * std::exp(-4.0 * c.half_gap * kappa2);
}

quad::QuadOptions relative_options(double rel_tol, long budget)
{
    quad::QuadOptions o;
    o.abs_tol = std::numeric_limits<double>::min();
    o.rel_tol = rel_tol;
    o.max_evaluations = budget;
    o.throw_on_budget = false;
    return o;
}

double energy_scale(const CavityConfig& c)
{
    return 1.0 / (4.0 * c.half_gap);
}

}  // namespace

std::string to_string(EnergyRoute r)
{
    switch (r) {
    case EnergyRoute::ModeSumRealAxis:
        return "mode-sum-real-axis";
    case EnergyRoute::ImaginaryAxis:
        return "imaginary-axis";
    case EnergyRoute::Matsubara:
        return "matsubara";
    }
    return "unknown";
}

double dispersion_imaginary_axis(double zeta, double k, const CavityConfig& config)
{
    return 1.0 - round_trip(zeta, k, config);
}

double log_dispersion_imaginary_axis(double zeta, double k, const CavityConfig& config)
{
    const double x = round_trip(zeta, k, config);
    if (!(x < 1.0)) {
        std::ostringstream msg;
        msg << "D(i zeta, k) = " << 1.0 - x << " is not positive at zeta = " << zeta
            << ", k = " << k;
        throw Error(ErrorCode::NonPositiveD, msg.str());
    }
    return std::log1p(-x);
}

quad::QuadratureResult imaginary_axis_per_k(const CavityConfig& config, double k, double rel_tol)
{
    config.validate();
    auto f = [&](double zeta) { return log_dispersion_imaginary_axis(zeta, k, config); };
    auto r = quad::integrate_semi_infinite(f, 0.0, energy_scale(config),
                                           relative_options(rel_tol, 200000));
    r.value /= kTwoPi;
    r.error_estimate /= kTwoPi;
    return r;
}

EnergyResult energy_imaginary_axis(const CavityConfig& config, const CasimirOptions& opts)
{
    config.validate();
    EnergyResult out;
    out.route = EnergyRoute::ImaginaryAxis;
    const double inner_tol = std::min(1e-12, 0.01 * opts.rel_tol);
    double worst_inner = 0.0;
    long inner_evals = 0;
    for (Polarization s : {Polarization::TE, Polarization::TM}) {
        const CavityConfig c = config.with_sigma(s);
        auto f = [&](double k) {
            const auto r = imaginary_axis_per_k(c, k, inner_tol);
            inner_evals += r.evaluations;
            if (r.value != 0.0)
                worst_inner = std::max(worst_inner, r.error_estimate / std::abs(r.value));
            return k / kTwoPi * r.value;
        };
        const auto r = quad::integrate_semi_infinite(f, 0.0, energy_scale(config),
                                                     relative_options(opts.rel_tol, 100000));
        out.value += r.value;
        out.truncation.quadrature_error += r.error_estimate;
        out.truncation.evaluations += r.evaluations;
    }
    // every per-k value has the sign of ln D < 0, so relative errors carry over
    out.truncation.quadrature_error += worst_inner * std::abs(out.value);
    out.truncation.evaluations += inner_evals;
    out.truncation.k_decay_scale = energy_scale(config);
    out.truncation.zeta_decay_scale = energy_scale(config);
    return out;
}

RealAxisReport energy_real_axis_per_k(const CavityConfig& config, const KPoint& kp,
                                      double omega_cut)
{
    config.validate();
    if (config.model.kind != ModelKind::Plasma)
        throw Error(ErrorCode::ModelMismatch, "the real-axis mode sum requires the plasma model");
    if (!(omega_cut > kp.omega_plus))
        throw Error(ErrorCode::DomainError, "omega_cut must exceed omega_plus");

    RealAxisReport rep;
    const double a = config.half_gap;
    const double wp = config.model.omega_p;
    const double wm = kp.omega_minus;
    const double wpl = kp.omega_plus;

    ModeOptions mo;
    mo.omega_cut_factor = 1.5;
    rep.modes = find_modes(config, kp, mo);
    rep.reflection_pole = reflection_pole(config, kp);
    double half_sum = 0.0;
    for (double w : rep.modes.surface_modes)
        half_sum += 0.5 * w;
    for (double w : rep.modes.waveguide_modes)
        half_sum += 0.5 * w;
    // the double pole of D at the reflection pole enters with weight -2
    rep.mode_sum_part = half_sum - rep.reflection_pole.value_or(0.0);
    rep.branch_point_part = 0.25 * wm;

    quad::QuadOptions qo;
    qo.abs_tol = 1e-15;
    qo.rel_tol = 1e-13;
    qo.max_evaluations = 2'000'000;
    qo.throw_on_budget = false;

    // band: k2 = wp sin t, |k1| = wp cos t, so both edge square roots are smooth in t
    auto band_integrand = [&](double t) {
        const double k2 = wp * std::sin(t);
        const double kappa1 = wp * std::cos(t);
        const double w2 = wm * wm + k2 * k2;
        const double w = std::sqrt(w2);
        const double eps = config.sigma == Polarization::TE ? 1.0 : 1.0 - wp * wp / w2;
        const double phi = 2.0 * (kPi - 2.0 * std::atan2(kappa1, eps * k2)) + 4.0 * a * k2;
        return phi * k2 / w * wp * std::cos(t);
    };
    std::vector<double> band_edges{0.0};
    for (long n = 1; static_cast<double>(n) * kPi / (2.0 * a) < wp; ++n)
        band_edges.push_back(std::asin(static_cast<double>(n) * kPi / (2.0 * a) / wp));
    band_edges.push_back(0.5 * kPi);
    const auto band = quad::integrate_panels(band_integrand, band_edges, qo);
    const double phi_edge = 2.0 * kPi + 4.0 * a * std::sqrt(wpl * wpl - wm * wm);
    rep.band_part = -(wpl * phi_edge - band.value) / (4.0 * kPi);

    // continuum in k2 on panels of the round-trip period pi / (2a)
    const double q_lo = std::sqrt(wpl * wpl - wm * wm);
    const double q_hi = std::sqrt(omega_cut * omega_cut - wm * wm);
    auto cont_integrand = [&](double q) {
        const double w = std::sqrt(wm * wm + q * q);
        return continuum_phase_shift(w, config, kp) * q / w;
    };
    std::vector<double> cont_edges{q_lo};
    const double period = kPi / (2.0 * a);
    for (double q = (std::floor(q_lo / period) + 1.0) * period; q < q_hi; q += period) {
        if (q > cont_edges.back() * (1.0 + 1e-12))
            cont_edges.push_back(q);
    }
    cont_edges.push_back(q_hi);
    const auto cont = quad::integrate_panels(cont_integrand, cont_edges, qo);
    const double delta_edge = continuum_phase_shift_at_edge(config, kp);
    rep.continuum_part = (-wpl * delta_edge - cont.value) / kTwoPi;

    // |delta| <= (pi/2)|r|^2 with |r| <= 1.5 wp^2 / ((w + w+)(w - w+))
    const double tail = 0.5 * kPi * 2.25 * std::pow(wp, 4) /
                        ((omega_cut + wpl) * (omega_cut + wpl) * (omega_cut - wpl)) / kTwoPi;

    rep.real_axis_total =
        rep.mode_sum_part + rep.branch_point_part + rep.band_part + rep.continuum_part;
    const auto imag = imaginary_axis_per_k(config, kp.k, 1e-14);
    rep.imaginary_axis_part = imag.value;
    rep.mismatch = std::abs(rep.real_axis_total - rep.imaginary_axis_part);

    const double root_err =
        64.0 * std::numeric_limits<double>::epsilon() * wpl *
        static_cast<double>(rep.modes.surface_modes.size() + rep.modes.waveguide_modes.size() + 1);
    rep.truncation.quadrature_error =
        band.error_estimate / (4.0 * kPi) + cont.error_estimate / kTwoPi + imag.error_estimate;
    rep.truncation.tail_bound = tail;
    rep.truncation.evaluations = band.evaluations + cont.evaluations + imag.evaluations;
    rep.truncation.omega_cut = omega_cut;
    rep.bound = rep.truncation.quadrature_error + tail + root_err;
    rep.passed = rep.mismatch <= std::max(1e-3 * std::abs(rep.imaginary_axis_part), rep.bound);
    return rep;
}

double oscillator_free_energy(double omega, double temperature)
{
    if (!(omega >= 0.0) || !(temperature >= 0.0) || !std::isfinite(omega) ||
        !std::isfinite(temperature))
        throw Error(ErrorCode::DomainError, "oscillator free energy needs w >= 0 and T >= 0");
    if (temperature == 0.0)
        return 0.5 * omega;
    if (omega == 0.0)
        throw Error(ErrorCode::DivergentFreeEnergy,
                    "a zero-frequency oscillator has no finite free energy at T > 0");
    return 0.5 * omega + temperature * std::log(-std::expm1(-omega / temperature));
}

SeriesValue oscillator_free_energy_series(double omega, double temperature, int terms)
{
    if (!(omega > 0.0) || !(temperature > 0.0) || terms < 0)
        throw Error(ErrorCode::DomainError, "series form needs w > 0, T > 0, terms >= 0");
    const double x = std::exp(-omega / temperature);
    SeriesValue out;
    out.terms = terms;
    double sum = 0.0;
    double xn = 1.0;
    for (int n = 1; n <= terms; ++n) {
        xn *= x;
        sum += xn / n;
    }
    out.value = 0.5 * omega - temperature * sum;
    out.truncation_bound = temperature * xn * x / ((terms + 1.0) * (1.0 - x));
    return out;
}

double MatsubaraGrid::zeta(long m) const
{
    return kTwoPi * static_cast<double>(m) * temperature;
}

void MatsubaraGrid::validate() const
{
    if (!(temperature > 0.0) || !std::isfinite(temperature))
        throw Error(ErrorCode::DomainError, "Matsubara sums need T > 0");
    if (max_terms < 0)
        throw Error(ErrorCode::InvalidArgument, "max_terms must be >= 0");
    if (!(tolerance > 0.0))
        throw Error(ErrorCode::InvalidArgument, "Matsubara tolerance must be positive");
}

double matsubara_zero_term(const CavityConfig& config, double k)
{
    // f(h) = f0 + c1 h + c2 h^2 + ...: two Richardson levels from h, h/2, h/4
    const double h = 1e-8 * config.model.omega_p;
    const double f1 = log_dispersion_imaginary_axis(h, k, config);
    const double f2 = log_dispersion_imaginary_axis(0.5 * h, k, config);
    const double f3 = log_dispersion_imaginary_axis(0.25 * h, k, config);
    const double r12 = 2.0 * f2 - f1;
    const double r23 = 2.0 * f3 - f2;
    return (4.0 * r23 - r12) / 3.0;
}

MatsubaraSum matsubara_sum_per_k(const CavityConfig& config, const MatsubaraGrid& grid, double k)
{
    grid.validate();
    MatsubaraSum out;
    double sum = MatsubaraGrid::m0_weight * matsubara_zero_term(config, k);
    double prev = 0.0;
    double prev_ratio = 1.0;
    constexpr long kHardCap = 50'000'000;
    const long cap = grid.max_terms > 0 ? grid.max_terms : kHardCap;
    out.tail_bound = std::numeric_limits<double>::infinity();
    for (long m = 1; m <= cap; ++m) {
        const double t = log_dispersion_imaginary_axis(grid.zeta(m), k, config);
        sum += t;
        out.terms = m;
        if (t == 0.0) {
            out.tail_bound = 0.0;
            break;
        }
        if (m > 1) {
            const double ratio = t / prev;
            // geometric bound, valid once ratios stop increasing
            if (ratio > 0.0 && ratio < 1.0 && ratio <= prev_ratio * (1.0 + 1e-12)) {
                out.tail_bound = std::abs(t) * ratio / (1.0 - ratio);
                if (grid.max_terms == 0 && out.tail_bound <= grid.tolerance * std::abs(sum))
                    break;
            } else {
                out.tail_bound = std::numeric_limits<double>::infinity();
            }
            prev_ratio = ratio;
        }
        prev = t;
        if (grid.max_terms == 0 && m == kHardCap)
            throw Error(ErrorCode::NoConvergence, "Matsubara sum did not converge");
    }
    out.value = grid.temperature * sum;
    out.tail_bound *= grid.temperature;
    return out;
}

EnergyResult free_energy_matsubara(const CavityConfig& config, const MatsubaraGrid& grid,
                                   const CasimirOptions& opts)
{
    config.validate();
    grid.validate();
    EnergyResult out;
    out.route = EnergyRoute::Matsubara;
    double worst_tail = 0.0;
    for (Polarization s : {Polarization::TE, Polarization::TM}) {
        const CavityConfig c = config.with_sigma(s);
        auto f = [&](double k) {
            const MatsubaraSum ms = matsubara_sum_per_k(c, grid, k);
            out.truncation.matsubara_terms = std::max(out.truncation.matsubara_terms, ms.terms);
            if (ms.value != 0.0)
                worst_tail = std::max(worst_tail, ms.tail_bound / std::abs(ms.value));
            return k / kTwoPi * ms.value;
        };
        const auto r = quad::integrate_semi_infinite(f, 0.0, energy_scale(config),
                                                     relative_options(opts.rel_tol, 100000));
        out.value += r.value;
        out.truncation.quadrature_error += r.error_estimate;
        out.truncation.evaluations += r.evaluations;
    }
    out.truncation.tail_bound = worst_tail * std::abs(out.value);
    out.truncation.k_decay_scale = energy_scale(config);
    out.truncation.zeta_decay_scale = kTwoPi * grid.temperature;
    return out;
}

PressureResult casimir_pressure(const CavityConfig& config,
                                const std::optional<MatsubaraGrid>& thermal,
                                const CasimirOptions& opts)
{
    config.validate();
    auto energy_at_gap = [&](double gap) {
        if (!(gap > 0.0))
            throw Error(ErrorCode::StepUnderflow, "difference step reaches zero gap");
        CavityConfig c = config;
        c.half_gap = 0.5 * gap;
        return thermal ? free_energy_matsubara(c, *thermal, opts).value
                       : energy_imaginary_axis(c, opts).value;
    };
    const double gap = 2.0 * config.half_gap;
    PressureResult out;
    double h0 = 0.05 * gap;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const quad::Derivative d = quad::differentiate_richardson(energy_at_gap, gap, h0);
        out.value = -d.value;
        out.error_estimate = d.error_estimate;
        out.step = h0;
        out.widened = attempt > 0;
        if (d.error_estimate <= 1e-4 * std::abs(d.value))
            return out;
        h0 *= 4.0;
    }
    std::ostringstream msg;
    msg << "pressure derivative error " << out.error_estimate << " exceeds 1e-4 |P| = "
        << 1e-4 * std::abs(out.value);
    throw Error(ErrorCode::StepUnderflow, msg.str());
}

double classic_lifshitz_integrand(const CavityConfig& config, double temperature, long m,
                                  double p)
{
    if (m < 1)
        throw Error(ErrorCode::DomainError, "the p substitution needs m >= 1");
    if (!(p >= 1.0))
        throw Error(ErrorCode::DomainError, "the p substitution needs p >= 1");
    const MatsubaraGrid grid{temperature, 0, 1e-12};
    grid.validate();
    const double zeta = grid.zeta(m);
    const double k = zeta * std::sqrt((p - 1.0) * (p + 1.0));
    return zeta * zeta * p / kTwoPi * log_dispersion_imaginary_axis(zeta, k, config);
}

namespace {

// ln|1 - z| without losing digits when |z| is small
double log_abs_one_minus(cplx z)
{
    return 0.5 * std::log1p(std::norm(z) - 2.0 * z.real());
}

struct AnomalySample {
    double log_ratio;    // ln D(i zeta) - ln|D(-i zeta)|
    double one_sided;    // Im of the same with one edge value of ln D(-i zeta)
};

AnomalySample anomaly_sample(double zeta, const KPoint& kp, const CavityConfig& base)
{
    AnomalySample s{0.0, 0.0};
    const cplx up(0.0, zeta);
    const cplx down(0.0, -zeta);
    const cplx eps_up = eval_permittivity(base.model, up);
    const cplx eps_down = eval_permittivity(base.model, down);
    const Wavevectors w_up = transverse_wavevectors(up, kp, base.model);
    const Wavevectors w_down = transverse_wavevectors(down, kp, base.model);
    const cplx phase_up = std::exp(cplx(0.0, 4.0 * base.half_gap) * w_up.k2);
    const cplx phase_down = std::exp(cplx(0.0, 4.0 * base.half_gap) * w_down.k2);
    for (Polarization p : {Polarization::TE, Polarization::TM}) {
        const cplx ru = reflection_from(w_up, eps_up, p);
        const cplx rd = reflection_from(w_down, eps_down, p);
        const cplx zu = ru * ru * phase_up;
        const cplx zd = rd * rd * phase_down;
        s.log_ratio += log_abs_one_minus(zu) - log_abs_one_minus(zd);
        s.one_sided += std::atan2(zd.imag(), 1.0 - zd.real());
    }
    return s;
}

}  // namespace

AnomalyResult drude_anomaly(const CavityConfig& config, double temperature, long m_max,
                            const AnomalyOptions& opts)
{
    config.validate();
    if (config.model.kind != ModelKind::Drude)
        throw Error(ErrorCode::ModelMismatch, "the anomaly term is defined for the Drude model");
    if (!(temperature > 0.0) || !std::isfinite(temperature))
        throw Error(ErrorCode::DomainError, "the anomaly term needs T > 0");
    if (m_max < 1)
        throw Error(ErrorCode::InvalidArgument, "m_max must be >= 1");

    const double a = config.half_gap;
    const double g2 = 2.0 * config.model.gamma;
    const std::size_t nm = static_cast<std::size_t>(m_max);
    // components: m = 1..M, the one-sided diagnostic, the propagated inner error
    const std::size_t dim = nm + 2;
    // relative cut e^{-40} of the round-trip factor in zeta
    const double decay_span = 10.0 / a;

    quad::QuadOptions inner_opts;
    inner_opts.abs_tol = std::numeric_limits<double>::min();
    inner_opts.rel_tol = 0.1 * opts.rel_tol;
    inner_opts.max_evaluations = 2'000'000;
    inner_opts.throw_on_budget = false;

    auto outer = [&](double k, double* out) {
        const KPoint kp = KPoint::make(k, config.model);
        const double zeta_max =
            std::max(std::sqrt(2.0 * k * decay_span + decay_span * decay_span), 2.0 * g2);
        std::vector<double> edges{0.0};
        if (g2 > 0.0)
            edges.push_back(g2);
        // one initial panel per period of the fastest sine
        const double width = kTwoPi * temperature / static_cast<double>(m_max);
        for (double z = edges.back() + width; z < zeta_max - 0.5 * width; z += width)
            edges.push_back(z);
        edges.push_back(zeta_max);
        auto inner = [&](double zeta, double* v) {
            const AnomalySample s = anomaly_sample(zeta, kp, config);
            const double x = zeta / temperature;
            const double c = 2.0 * std::cos(x);
            double s_prev = 0.0;
            double s_cur = std::sin(x);
            double dirichlet = 0.0;
            for (std::size_t m = 0; m < nm; ++m) {
                v[m] = s_cur * s.log_ratio;
                dirichlet += s_cur;
                const double next = c * s_cur - s_prev;
                s_prev = s_cur;
                s_cur = next;
            }
            v[nm] = dirichlet * s.one_sided;
        };
        const auto r = quad::integrate_vector_panels(inner, nm + 1, edges, inner_opts);
        const double w = k / (kTwoPi * kTwoPi);
        double inner_err = 0.0;
        for (std::size_t m = 0; m <= nm; ++m) {
            out[m] = w * r.value[m];
            if (m < nm)
                inner_err += r.error_estimate[m];
        }
        out[nm + 1] = w * inner_err;
    };

    quad::QuadOptions outer_opts;
    outer_opts.abs_tol = std::numeric_limits<double>::min();
    outer_opts.rel_tol = opts.rel_tol;
    outer_opts.max_evaluations = 20000;
    outer_opts.throw_on_budget = false;
    const double s = 1.0 / (4.0 * a);
    auto mapped = [&](double t, double* out) {
        const double one_minus = 1.0 - t;
        const double k = s * t / one_minus;
        if (one_minus <= 0.0 || !std::isfinite(k)) {
            std::fill(out, out + dim, 0.0);
            return;
        }
        outer(k, out);
        const double jac = s / (one_minus * one_minus);
        for (std::size_t c = 0; c < dim; ++c)
            out[c] *= jac;
    };
    const auto r = quad::integrate_vector_panels(mapped, dim, {0.0, 0.5, 1.0}, outer_opts);

    AnomalyResult res;
    double partial = 0.0;
    res.noise_floor = r.value[nm + 1];
    for (std::size_t m = 0; m < nm; ++m) {
        // Delta F = -i sum_m X_m
        partial += r.value[m];
        res.partial_sums.push_back(cplx(0.0, -partial));
        res.term_magnitudes.push_back(std::abs(r.value[m]));
        res.noise_floor += r.error_estimate[m];
    }
    // neglected zeta > zeta_max: |ln D| <= 2 e^{-4 a kappa2} on both sides
    const double cut = std::exp(-4.0 * a * decay_span);
    res.noise_floor += static_cast<double>(m_max) * 4.0 * cut * (decay_span / (16.0 * a * a) +
                                                                 1.0 / (32.0 * a * a * a)) /
                       (kTwoPi * kTwoPi);
    res.value = cplx(0.0, -partial);
    res.one_sided_real_part = opts.one_sided_diagnostic ? r.value[nm] : 0.0;

    for (long m = std::max<long>(1, m_max / 2); m <= m_max; ++m) {
        const cplx d = res.partial_sums[static_cast<std::size_t>(m - 1)] - res.value;
        res.tail_estimate = std::max(res.tail_estimate, std::abs(d));
    }
    res.converged = res.tail_estimate <= 0.1 * std::abs(res.value);
    if (!res.converged && opts.throw_on_divergence) {
        std::ostringstream msg;
        msg << "anomaly partial sums do not settle: spread " << res.tail_estimate
            << " over the last half of " << m_max << " terms against |sum| " << std::abs(res.value);
        throw Error(ErrorCode::OscillatoryDivergence, msg.str());
    }
    return res;
}

}  // namespace lifshitz
