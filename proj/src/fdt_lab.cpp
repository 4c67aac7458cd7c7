#include "lifshitz/fdt_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lifshitz/errors.hpp"

namespace lifshitz {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
using cd = std::complex<double>;

double max_abs(const Matrix& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_hermitian(const Matrix& m, const std::string& what, ErrorCode code)
{
    if (m.rows() != m.cols())
        throw Error(ErrorCode::InvalidArgument, what + " must be square");
    const double scale = std::max(1.0, max_abs(m));
    if (max_abs(m - m.adjoint()) > 1e-12 * scale)
        throw Error(code, what + " is not Hermitian");
}

// Builds lines over all eigenstate pairs; weight(nu, mu) supplies the value.
template <class F>
LineSpectrum pair_lines(const QuantumSystem& sys, F&& weight)
{
    const int d = sys.dim();
    const Eigen::VectorXd& e = sys.energies();
    std::vector<Line> lines;
    lines.reserve(static_cast<std::size_t>(d) * d);
    for (int nu = 0; nu < d; ++nu) {
        for (int mu = 0; mu < d; ++mu) {
            const cd w = weight(nu, mu);
            if (w != cd(0.0, 0.0))
                lines.push_back({(e(mu) - e(nu)) / sys.hbar(), w});
        }
    }
    return LineSpectrum::from_lines(std::move(lines), line_merge_tolerance(sys));
}

void require_index(const QuantumSystem& sys, std::size_t i)
{
    if (i >= sys.observable_count())
        throw Error(ErrorCode::InvalidArgument, "observable index out of range");
}

}  // namespace

QuantumSystem::QuantumSystem(Matrix hamiltonian, std::vector<NamedObservable> observables,
                             double beta, double hbar)
    : h_(std::move(hamiltonian)), obs_(std::move(observables)), beta_(beta), hbar_(hbar)
{
    if (h_.rows() < 2)
        throw Error(ErrorCode::InvalidArgument, "system dimension must be at least 2");
    if (!(beta_ >= 0.0) || !std::isfinite(beta_))
        throw Error(ErrorCode::DomainError, "beta must be finite and non-negative");
    if (!(hbar_ > 0.0))
        throw Error(ErrorCode::DomainError, "hbar must be positive");
    require_hermitian(h_, "Hamiltonian", ErrorCode::DomainError);
    for (const auto& o : obs_) {
        if (o.op.rows() != h_.rows() || o.op.cols() != h_.cols())
            throw Error(ErrorCode::InvalidArgument, "observable '" + o.name + "' has wrong size");
        require_hermitian(o.op, "observable '" + o.name + "'", ErrorCode::NonHermitianObservable);
    }

    Eigen::SelfAdjointEigenSolver<Matrix> solver(h_);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::NoConvergence, "eigen-decomposition failed");
    energies_ = solver.eigenvalues();
    vecs_ = solver.eigenvectors();
    scale_ = std::max(1.0, energies_.cwiseAbs().maxCoeff());
    residual_ = max_abs(h_ * vecs_ - vecs_ * energies_.cast<cd>().asDiagonal());
    if (residual_ > 1e-10 * scale_)
        throw Error(ErrorCode::NoConvergence, "eigen-decomposition residual too large");

    const double emin = energies_.minCoeff();
    weights_.resize(energies_.size());
    for (Eigen::Index k = 0; k < energies_.size(); ++k)
        weights_(k) = std::exp(-beta_ * (energies_(k) - emin));
    const double z = weights_.sum();
    weights_ /= z;
    log_q_ = -beta_ * emin + std::log(z);

    obs_eig_.reserve(obs_.size());
    for (const auto& o : obs_)
        obs_eig_.push_back(vecs_.adjoint() * o.op * vecs_);
}

QuantumSystem QuantumSystem::two_level(double omega0, double beta, double hbar)
{
    Matrix sx(2, 2), sy(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sy << 0, cd(0, -1), cd(0, 1), 0;
    sz << 1, 0, 0, -1;
    Matrix h = 0.5 * hbar * omega0 * sz;
    return QuantumSystem(h, {{"sx", sx}, {"sy", sy}, {"sz", sz}}, beta, hbar);
}

QuantumSystem QuantumSystem::harmonic_oscillator(int dim, double omega0, double mass,
                                                 double beta, double hbar)
{
    if (dim < 2)
        throw Error(ErrorCode::InvalidArgument, "oscillator dimension must be at least 2");
    if (!(omega0 > 0.0) || !(mass > 0.0))
        throw Error(ErrorCode::DomainError, "oscillator frequency and mass must be positive");
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n)
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    Matrix h = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n)
        h(n, n) = hbar * omega0 * (n + 0.5);
    const Matrix x = std::sqrt(hbar / (2.0 * mass * omega0)) * (a + a.adjoint());
    const Matrix p = cd(0.0, std::sqrt(hbar * mass * omega0 / 2.0)) * (a.adjoint() - a);
    return QuantumSystem(h, {{"x", x}, {"p", p}}, beta, hbar);
}

std::size_t QuantumSystem::observable_index(const std::string& name) const
{
    for (std::size_t i = 0; i < obs_.size(); ++i) {
        if (obs_[i].name == name)
            return i;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown observable '" + name + "'");
}

const std::string& QuantumSystem::observable_name(std::size_t i) const
{
    require_index(*this, i);
    return obs_[i].name;
}

const Matrix& QuantumSystem::observable(std::size_t i) const
{
    require_index(*this, i);
    return obs_[i].op;
}

const Matrix& QuantumSystem::observable_eigenbasis(std::size_t i) const
{
    require_index(*this, i);
    return obs_eig_[i];
}

double QuantumSystem::expectation(std::size_t i) const
{
    const Matrix& a = observable_eigenbasis(i);
    double s = 0.0;
    for (int k = 0; k < dim(); ++k)
        s += weights_(k) * a(k, k).real();
    return s;
}

std::complex<double> QuantumSystem::equal_time_correlator(std::size_t i, std::size_t j) const
{
    const Matrix& a = observable_eigenbasis(i);
    const Matrix& b = observable_eigenbasis(j);
    cd s{};
    for (int mu = 0; mu < dim(); ++mu) {
        for (int nu = 0; nu < dim(); ++nu)
            s += weights_(mu) * a(mu, nu) * b(nu, mu);
    }
    return s;
}

bool QuantumSystem::is_adjoint_pair(std::size_t i, std::size_t j) const
{
    const Matrix& a = observable(i);
    const Matrix& b = observable(j);
    return max_abs(b - a.adjoint()) <= 1e-12 * std::max(1.0, max_abs(a));
}

double line_merge_tolerance(const QuantumSystem& sys)
{
    return 1e-12 * sys.energy_scale() / sys.hbar();
}

LineSpectrum correlator_line_spectrum(const QuantumSystem& sys, std::size_t i, std::size_t j,
                                      bool require_positive)
{
    const Matrix& a = sys.observable_eigenbasis(i);
    const Matrix& b = sys.observable_eigenbasis(j);
    const Eigen::VectorXd& p = sys.gibbs_weights();
    const bool paired = sys.is_adjoint_pair(i, j);
    if (require_positive && !paired)
        throw Error(ErrorCode::NonHermitianObservable,
                    "positivity requested for observables that are not an adjoint pair");
    LineSpectrum s = pair_lines(sys, [&](int nu, int mu) {
        return kTwoPi * p(nu) * a(nu, mu) * b(mu, nu);
    });
    return paired ? s.as_positive() : s;
}

LineSpectrum reversed_correlator_line_spectrum(const QuantumSystem& sys, std::size_t i,
                                               std::size_t j)
{
    const Matrix& a = sys.observable_eigenbasis(i);
    const Matrix& b = sys.observable_eigenbasis(j);
    const Eigen::VectorXd& p = sys.gibbs_weights();
    return pair_lines(sys, [&](int nu, int mu) {
        return kTwoPi * p(mu) * a(nu, mu) * b(mu, nu);
    });
}

LineSpectrum symmetrized_line_spectrum(const QuantumSystem& sys, std::size_t i, std::size_t j)
{
    const Matrix& a = sys.observable_eigenbasis(i);
    const Matrix& b = sys.observable_eigenbasis(j);
    const Eigen::VectorXd& p = sys.gibbs_weights();
    return pair_lines(sys, [&](int nu, int mu) {
        return 0.5 * kTwoPi * (p(nu) + p(mu)) * a(nu, mu) * b(mu, nu);
    });
}

LineSpectrum commutator_line_spectrum(const QuantumSystem& sys, std::size_t i, std::size_t j)
{
    const Matrix& a = sys.observable_eigenbasis(i);
    const Matrix& b = sys.observable_eigenbasis(j);
    const Eigen::VectorXd& p = sys.gibbs_weights();
    return pair_lines(sys, [&](int nu, int mu) {
        return kTwoPi * (p(nu) - p(mu)) * a(nu, mu) * b(mu, nu);
    });
}

KmsReport kms_check(const QuantumSystem& sys, std::size_t i, std::size_t j)
{
    const LineSpectrum fwd = correlator_line_spectrum(sys, i, j);
    const LineSpectrum rev = reversed_correlator_line_spectrum(sys, i, j);
    const double scale = std::max({fwd.max_abs_weight(), rev.max_abs_weight(), 1e-300});
    const double tol = line_merge_tolerance(sys);
    const double bh = sys.beta() * sys.hbar();
    KmsReport r;
    for (const Line& l : fwd.lines()) {
        const auto w_rev = rev.weight_at(l.frequency, tol);
        if (!w_rev)
            continue;
        const double x = -bh * l.frequency;
        // compare in the direction whose Boltzmann factor cannot overflow
        const double v = x <= 0.0 ? std::abs(*w_rev - std::exp(x) * l.weight)
                                  : std::abs(std::exp(-x) * *w_rev - l.weight);
        r.max_ratio_error = std::max(r.max_ratio_error, v / scale);
        ++r.lines_checked;
    }
    return r;
}

namespace {

cd green_sum(const QuantumSystem& sys, std::size_t i, std::size_t j, cd omega)
{
    const LineSpectrum c = commutator_line_spectrum(sys, i, j);
    const double tol = line_merge_tolerance(sys);
    cd s{};
    for (const Line& l : c.lines()) {
        const cd den = l.frequency - omega;
        if (omega.imag() == 0.0 && std::abs(den) <= tol) {
            std::ostringstream msg;
            msg << "Green function evaluated on the line at omega = " << l.frequency;
            throw Error(ErrorCode::OnPole, msg.str());
        }
        // line weight of -J_comm; 1/(w_l - w) with the pole bypassed by +-i0
        s += -l.weight / den;
    }
    return s / (kTwoPi * sys.hbar());
}

cd time_kernel(const QuantumSystem& sys, std::size_t i, std::size_t j, double t)
{
    const LineSpectrum c = commutator_line_spectrum(sys, i, j);
    cd s{};
    for (const Line& l : c.lines())
        s += l.weight / kTwoPi * std::exp(cd(0.0, -l.frequency * t));
    return s / cd(0.0, sys.hbar());
}

}  // namespace

std::complex<double> retarded_green_eval(const QuantumSystem& sys, std::size_t i, std::size_t j,
                                         std::complex<double> omega)
{
    if (omega.imag() < 0.0)
        throw Error(ErrorCode::DomainError, "retarded Green function needs Im omega >= 0");
    return green_sum(sys, i, j, omega);
}

std::complex<double> advanced_green_eval(const QuantumSystem& sys, std::size_t i, std::size_t j,
                                         std::complex<double> omega)
{
    if (omega.imag() > 0.0)
        throw Error(ErrorCode::DomainError, "advanced Green function needs Im omega <= 0");
    return green_sum(sys, i, j, omega);
}

std::complex<double> retarded_green_time(const QuantumSystem& sys, std::size_t i, std::size_t j,
                                         double t)
{
    if (t < 0.0)
        return 0.0;
    const double theta = t == 0.0 ? 0.5 : 1.0;
    return theta * time_kernel(sys, i, j, t);
}

std::complex<double> advanced_green_time(const QuantumSystem& sys, std::size_t i, std::size_t j,
                                         double t)
{
    if (t > 0.0)
        return 0.0;
    const double theta = t == 0.0 ? 0.5 : 1.0;
    return -theta * time_kernel(sys, i, j, t);
}

LineSpectrum imag_retarded_lines(const QuantumSystem& sys, std::size_t i)
{
    const LineSpectrum c = commutator_line_spectrum(sys, i, i);
    std::vector<Line> lines;
    for (const Line& l : c.lines())
        lines.push_back({l.frequency, cd(-l.weight.real() / (2.0 * sys.hbar()), 0.0)});
    return LineSpectrum::from_lines(std::move(lines));
}

std::complex<double> susceptibility(const QuantumSystem& sys, std::size_t i, std::size_t j,
                                    std::complex<double> omega)
{
    return -retarded_green_eval(sys, i, j, omega);
}

FdtReport fdt_verify(const QuantumSystem& sys, std::size_t i, ZeroLinePolicy policy)
{
    if (!(sys.beta() > 0.0))
        throw Error(ErrorCode::DomainError, "fdt_verify needs beta > 0");
    FdtReport r;
    r.lhs = sys.equal_time_correlator(i, i).real();

    const double tol = line_merge_tolerance(sys);
    const LineSpectrum j = correlator_line_spectrum(sys, i, i);
    if (const auto w0 = j.weight_at(0.0, tol))
        r.static_weight = w0->real() / kTwoPi;
    r.zero_frequency_ambiguity = r.static_weight > 1e-14 * std::max(1.0, std::abs(r.lhs));
    if (r.zero_frequency_ambiguity && policy == ZeroLinePolicy::Reject) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "observable has a static (omega = 0) line of weight " << r.static_weight
            << "; coth(0) leaves the theorem's right-hand side undefined there";
        throw Error(ErrorCode::ZeroFrequencyLine, msg.str());
    }

    const double bh = sys.beta() * sys.hbar();
    const LineSpectrum im = imag_retarded_lines(sys, i);
    for (const Line& l : im.lines()) {
        if (std::abs(l.frequency) <= tol)
            continue;
        const double coth = 1.0 / std::tanh(0.5 * bh * l.frequency);
        r.rhs += -(sys.hbar() / kTwoPi) * coth * l.weight.real();
        ++r.lines_used;
    }
    r.abs_error = std::abs(r.lhs - r.rhs);
    return r;
}

}  // namespace lifshitz
