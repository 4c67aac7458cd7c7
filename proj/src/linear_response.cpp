#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "lifshitz/errors.hpp"
#include "lifshitz/fdt_lab.hpp"
#include "lifshitz/quad.hpp"

namespace lifshitz {
namespace {

using cd = std::complex<double>;
using State = std::vector<cd>;
namespace odeint = boost::numeric::odeint;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Interaction-picture deviation from equilibrium in the H eigenbasis:
//   d(delta)/dt = (i/hbar) sum_j F_j(t) [A_j,I(t), rho_eq + delta]
// with (A_I)_{mu nu} = A_{mu nu} e^{i (E_mu - E_nu) t / hbar}.
class DrivenSystem {
public:
    DrivenSystem(const QuantumSystem& sys, const DrivingProtocol& drive)
        : sys_(sys), drive_(drive), d_(sys.dim())
    {
        for (const auto& ch : drive.forces)
            ops_.push_back(sys.observable_eigenbasis(ch.observable));
        phase_.resize(static_cast<std::size_t>(d_) * d_);
        a_t_.resize(phase_.size());
    }

    void operator()(const State& x, State& dxdt, double t)
    {
        const Eigen::VectorXd& e = sys_.energies();
        const Eigen::VectorXd& p = sys_.gibbs_weights();
        for (int mu = 0; mu < d_; ++mu) {
            for (int nu = 0; nu < d_; ++nu)
                phase_[idx(mu, nu)] = std::exp(cd(0.0, (e(mu) - e(nu)) * t / sys_.hbar()));
        }
        std::fill(dxdt.begin(), dxdt.end(), cd(0.0, 0.0));
        for (std::size_t c = 0; c < ops_.size(); ++c) {
            const double f = drive_.force(c, t);
            if (f == 0.0)
                continue;
            const Matrix& a = ops_[c];
            for (int mu = 0; mu < d_; ++mu) {
                for (int nu = 0; nu < d_; ++nu)
                    a_t_[idx(mu, nu)] = a(mu, nu) * phase_[idx(mu, nu)];
            }
            const cd pref(0.0, f / sys_.hbar());
            for (int mu = 0; mu < d_; ++mu) {
                for (int nu = 0; nu < d_; ++nu) {
                    // [A, rho] with rho = diag(p) + delta
                    cd comm = a_t_[idx(mu, nu)] * (p(nu) - p(mu));
                    for (int k = 0; k < d_; ++k)
                        comm += a_t_[idx(mu, k)] * x[idx(k, nu)] - x[idx(mu, k)] * a_t_[idx(k, nu)];
                    dxdt[idx(mu, nu)] += pref * comm;
                }
            }
        }
    }

private:
    std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * d_ + c; }

    const QuantumSystem& sys_;
    const DrivingProtocol& drive_;
    int d_;
    std::vector<Matrix> ops_;
    std::vector<cd> phase_;
    std::vector<cd> a_t_;
};

double purity(const QuantumSystem& sys, const State& x)
{
    const int d = sys.dim();
    const Eigen::VectorXd& p = sys.gibbs_weights();
    double s = 0.0;
    for (int mu = 0; mu < d; ++mu) {
        for (int nu = 0; nu < d; ++nu) {
            cd v = x[static_cast<std::size_t>(mu) * d + nu];
            if (mu == nu)
                v += p(mu);
            s += std::norm(v);
        }
    }
    return s;
}

// Tr(delta(t) A) in the Schroedinger picture from the interaction picture state.
double observable_shift(const QuantumSystem& sys, const State& x, std::size_t i, double t)
{
    const int d = sys.dim();
    const Matrix& a = sys.observable_eigenbasis(i);
    const Eigen::VectorXd& e = sys.energies();
    cd s{};
    for (int mu = 0; mu < d; ++mu) {
        for (int nu = 0; nu < d; ++nu) {
            const cd rho_s = x[static_cast<std::size_t>(mu) * d + nu] *
                             std::exp(cd(0.0, -(e(mu) - e(nu)) * t / sys.hbar()));
            s += rho_s * a(nu, mu);
        }
    }
    return s.real();
}

std::vector<double> direct_route(const QuantumSystem& sys, const DrivingProtocol& drive,
                                 const std::vector<double>& times, const LinearResponseOptions& opts,
                                 double& purity_drift)
{
    const int d = sys.dim();
    State x(static_cast<std::size_t>(d) * d, cd(0.0, 0.0));
    const double p0 = purity(sys, x);
    DrivenSystem rhs(sys, drive);

    std::vector<double> grid;
    grid.push_back(drive.start_time());
    grid.insert(grid.end(), times.begin(), times.end());

    std::vector<double> out;
    purity_drift = 0.0;
    auto observer = [&](const State& s, double t) {
        if (out.size() + 1 > grid.size())
            return;
        purity_drift = std::max(purity_drift, std::abs(purity(sys, s) - p0));
        out.push_back(observable_shift(sys, s, opts.response_observable, t));
    };
    try {
        auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(opts.abs_tol,
                                                                                  opts.rel_tol);
        odeint::integrate_times(stepper, std::ref(rhs), x, grid.begin(), grid.end(), 1e-2, observer,
                                odeint::max_step_checker(50'000'000));
    } catch (const std::exception& ex) {
        throw Error(ErrorCode::IntegratorDivergence,
                    std::string("time integration failed: ") + ex.what());
    }
    if (purity_drift > 1e-8)
        throw Error(ErrorCode::IntegratorDivergence, "purity drift exceeds 1e-8");
    // first observation is the initial state at the start time
    out.erase(out.begin());
    return out;
}

std::vector<double> convolution_route(const QuantumSystem& sys, const DrivingProtocol& drive,
                                      const std::vector<double>& times,
                                      const LinearResponseOptions& opts)
{
    const std::size_t i = opts.response_observable;
    struct Term {
        std::size_t channel;
        double freq;
        cd coeff;   // (1/i hbar) J_comm / 2pi
        cd running; // int_{t0}^{t} e^{i w tau} F_j(tau) dtau
    };
    std::vector<Term> terms;
    double max_freq = 0.0;
    for (std::size_t c = 0; c < drive.forces.size(); ++c) {
        const LineSpectrum comm = commutator_line_spectrum(sys, i, drive.forces[c].observable);
        for (const Line& l : comm.lines()) {
            terms.push_back({c, l.frequency, l.weight / kTwoPi / cd(0.0, sys.hbar()), {}});
            max_freq = std::max(max_freq, std::abs(l.frequency));
        }
    }

    quad::QuadOptions qo;
    qo.abs_tol = 1e-15;
    qo.rel_tol = 1e-13;
    qo.throw_on_budget = false;
    const double panel = std::numbers::pi / std::max(max_freq, 1.0);

    auto advance = [&](double from, double to) {
        if (to <= from)
            return;
        std::vector<double> edges{from};
        const int n = static_cast<int>(std::ceil((to - from) / panel));
        for (int k = 1; k < n; ++k)
            edges.push_back(from + (to - from) * k / n);
        edges.push_back(to);
        for (Term& term : terms) {
            auto re = [&](double tau) {
                return std::cos(term.freq * tau) * drive.force(term.channel, tau);
            };
            auto im = [&](double tau) {
                return std::sin(term.freq * tau) * drive.force(term.channel, tau);
            };
            term.running += cd(quad::integrate_panels(re, edges, qo).value,
                               quad::integrate_panels(im, edges, qo).value);
        }
    };

    std::vector<double> out;
    double t_prev = drive.start_time();
    for (double t : times) {
        advance(t_prev, t);
        t_prev = t;
        cd s{};
        for (const Term& term : terms)
            s += term.coeff * std::exp(cd(0.0, -term.freq * t)) * term.running;
        out.push_back(-s.real());
    }
    return out;
}

}  // namespace

double DrivingProtocol::force(std::size_t channel, double t) const
{
    return amplitude * std::exp(switch_rate * std::min(t, 0.0)) * forces[channel].profile(t);
}

double DrivingProtocol::start_time() const
{
    return std::log(envelope_cutoff) / switch_rate;
}

LinearResponseReport linear_response_sim(const QuantumSystem& sys, const DrivingProtocol& drive,
                                         double horizon, const LinearResponseOptions& opts)
{
    if (!(drive.switch_rate > 0.0))
        throw Error(ErrorCode::DomainError, "switch rate must be positive");
    if (!(drive.envelope_cutoff > 0.0 && drive.envelope_cutoff < 1.0))
        throw Error(ErrorCode::DomainError, "envelope cutoff must lie in (0, 1)");
    if (!(horizon > 0.0) || opts.samples < 2)
        throw Error(ErrorCode::DomainError, "horizon must be positive with at least 2 samples");
    if (opts.response_observable >= sys.observable_count())
        throw Error(ErrorCode::InvalidArgument, "response observable out of range");
    for (const auto& ch : drive.forces) {
        if (ch.observable >= sys.observable_count() || !ch.profile)
            throw Error(ErrorCode::InvalidArgument, "invalid force channel");
    }

    LinearResponseReport r;
    for (int k = 0; k < opts.samples; ++k)
        r.times.push_back(horizon * k / (opts.samples - 1));
    if (drive.amplitude == 0.0 || drive.forces.empty()) {
        r.delta_A_direct.assign(r.times.size(), 0.0);
        r.delta_A_convolution.assign(r.times.size(), 0.0);
        return r;
    }
    r.delta_A_direct = direct_route(sys, drive, r.times, opts, r.purity_drift);
    r.delta_A_convolution = convolution_route(sys, drive, r.times, opts);
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        r.max_error = std::max(r.max_error, std::abs(r.delta_A_direct[k] - r.delta_A_convolution[k]));
        r.max_abs_response = std::max(r.max_abs_response, std::abs(r.delta_A_direct[k]));
    }
    return r;
}

ScalingReport check_quadratic_scaling(const QuantumSystem& sys, const DrivingProtocol& drive,
                                      double horizon, int halvings,
                                      const LinearResponseOptions& opts, double min_ratio)
{
    ScalingReport s;
    DrivingProtocol d = drive;
    for (int k = 0; k <= halvings; ++k) {
        s.amplitudes.push_back(d.amplitude);
        s.max_errors.push_back(linear_response_sim(sys, d, horizon, opts).max_error);
        d.amplitude *= 0.5;
    }
    s.passed = true;
    for (std::size_t k = 1; k < s.max_errors.size(); ++k) {
        const double ratio = s.max_errors[k - 1] / s.max_errors[k];
        s.ratios.push_back(ratio);
        s.passed = s.passed && ratio >= min_ratio;
    }
    return s;
}

ScalingReport require_quadratic_scaling(const QuantumSystem& sys, const DrivingProtocol& drive,
                                        double horizon, int halvings,
                                        const LinearResponseOptions& opts)
{
    ScalingReport s = check_quadratic_scaling(sys, drive, horizon, halvings, opts);
    if (!s.passed)
        throw Error(ErrorCode::NonlinearRegime,
                    "direct/convolution mismatch does not scale as amplitude squared");
    return s;
}

std::complex<double> susceptibility_from_simulation(const QuantumSystem& sys, std::size_t i,
                                                    std::size_t j, double omega, double eps,
                                                    double amplitude, double horizon,
                                                    const LinearResponseOptions& opts)
{
    DrivingProtocol drive;
    drive.amplitude = amplitude;
    drive.switch_rate = eps;
    // envelope continues to grow after t = 0: e^{eps t} cos(Omega t) throughout
    drive.forces.push_back(
        {j, [eps, omega](double t) { return std::exp(eps * std::max(t, 0.0)) * std::cos(omega * t); }});
    LinearResponseOptions o = opts;
    o.response_observable = i;
    std::vector<double> times;
    for (int k = 0; k < o.samples; ++k)
        times.push_back(horizon * k / (o.samples - 1));
    double drift = 0.0;
    const std::vector<double> resp = direct_route(sys, drive, times, o, drift);

    // least squares for y = a cos + b sin with y = dA / (F0 e^{eps t})
    double cc = 0, ss = 0, cs = 0, yc = 0, ys = 0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        const double y = resp[k] / (amplitude * std::exp(eps * t));
        const double c = std::cos(omega * t);
        const double s = std::sin(omega * t);
        cc += c * c;
        ss += s * s;
        cs += c * s;
        yc += y * c;
        ys += y * s;
    }
    const double det = cc * ss - cs * cs;
    if (std::abs(det) < 1e-12 * cc * ss)
        throw Error(ErrorCode::DomainError, "sample window does not resolve the drive period");
    return {(yc * ss - ys * cs) / det, (ys * cc - yc * cs) / det};
}

}  // namespace lifshitz
