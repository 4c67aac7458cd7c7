#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lifshitz/line_spectrum.hpp"

namespace lifshitz {

using Matrix = Eigen::MatrixXcd;

struct NamedObservable {
    std::string name;
    Matrix op;
};

// Finite Hermitian system in its Gibbs state. Immutable after construction.
class QuantumSystem {
public:
    QuantumSystem(Matrix hamiltonian, std::vector<NamedObservable> observables, double beta,
                  double hbar = 1.0);

    // H = (hbar omega0 / 2) sigma_z; observables sx, sy, sz
    static QuantumSystem two_level(double omega0, double beta, double hbar = 1.0);
    // lowest dim levels of hbar omega0 (n + 1/2); observables x, p
    static QuantumSystem harmonic_oscillator(int dim, double omega0, double mass, double beta,
                                             double hbar = 1.0);

    int dim() const { return static_cast<int>(energies_.size()); }
    double beta() const { return beta_; }
    double hbar() const { return hbar_; }

    const Matrix& hamiltonian() const { return h_; }
    const Eigen::VectorXd& energies() const { return energies_; }
    const Matrix& eigenvectors() const { return vecs_; }
    const Eigen::VectorXd& gibbs_weights() const { return weights_; }
    double log_partition_function() const { return log_q_; }
    double eigen_residual() const { return residual_; }
    // max(1, max |E|), the scale for degeneracy and pole tolerances
    double energy_scale() const { return scale_; }

    std::size_t observable_count() const { return obs_.size(); }
    std::size_t observable_index(const std::string& name) const;
    const std::string& observable_name(std::size_t i) const;
    const Matrix& observable(std::size_t i) const;
    const Matrix& observable_eigenbasis(std::size_t i) const;

    double expectation(std::size_t i) const;
    // Tr(rho A_i A_j)
    std::complex<double> equal_time_correlator(std::size_t i, std::size_t j) const;
    bool is_adjoint_pair(std::size_t i, std::size_t j) const;

private:
    Matrix h_;
    std::vector<NamedObservable> obs_;
    std::vector<Matrix> obs_eig_;
    double beta_;
    double hbar_;
    Eigen::VectorXd energies_;
    Matrix vecs_;
    Eigen::VectorXd weights_;
    double log_q_ = 0.0;
    double residual_ = 0.0;
    double scale_ = 1.0;
};

// Degeneracy threshold for line frequencies, 1e-12 * energy scale / hbar.
double line_merge_tolerance(const QuantumSystem& sys);

// J_ij: transform of <A_i(t) A_j(0)>. Lines at (E_mu - E_nu)/hbar with
// weights 2 pi p_nu (A_i)_{nu mu} (A_j)_{mu nu}. Flagged positive when A_j
// is A_i^dagger; require_positive throws NonHermitianObservable otherwise.
LineSpectrum correlator_line_spectrum(const QuantumSystem& sys, std::size_t i, std::size_t j,
                                      bool require_positive = false);

// Transform over the same t of <A_j(0) A_i(t)>: identical line positions,
// weights 2 pi p_mu (A_i)_{nu mu} (A_j)_{mu nu}.
LineSpectrum reversed_correlator_line_spectrum(const QuantumSystem& sys, std::size_t i,
                                               std::size_t j);

// (J + J_reversed) / 2 and J - J_reversed
LineSpectrum symmetrized_line_spectrum(const QuantumSystem& sys, std::size_t i, std::size_t j);
LineSpectrum commutator_line_spectrum(const QuantumSystem& sys, std::size_t i, std::size_t j);

struct KmsReport {
    double max_ratio_error = 0.0;
    std::size_t lines_checked = 0;
};

KmsReport kms_check(const QuantumSystem& sys, std::size_t i, std::size_t j);

// Frequency domain, Im omega >= 0 (retarded) or <= 0 (advanced). Real
// omega must avoid line frequencies carrying commutator weight (OnPole).
std::complex<double> retarded_green_eval(const QuantumSystem& sys, std::size_t i, std::size_t j,
                                         std::complex<double> omega);
std::complex<double> advanced_green_eval(const QuantumSystem& sys, std::size_t i, std::size_t j,
                                         std::complex<double> omega);

// Time domain kernels; theta(0) = 1/2.
std::complex<double> retarded_green_time(const QuantumSystem& sys, std::size_t i, std::size_t j,
                                         double t);
std::complex<double> advanced_green_time(const QuantumSystem& sys, std::size_t i, std::size_t j,
                                         double t);

// Im G^r_{A A} on the real axis as a delta comb, (1/2hbar) J (e^{-beta hbar w} - 1).
LineSpectrum imag_retarded_lines(const QuantumSystem& sys, std::size_t i);

// Generalized susceptibility chi_ij = -G^r_ij.
std::complex<double> susceptibility(const QuantumSystem& sys, std::size_t i, std::size_t j,
                                    std::complex<double> omega);

enum class ZeroLinePolicy { Reject, Report };

struct FdtReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_error = 0.0;
    // (1/2pi) * weight of the omega = 0 line of J_AA, part of lhs only
    double static_weight = 0.0;
    bool zero_frequency_ambiguity = false;
    std::size_t lines_used = 0;
};

// lhs = Tr(rho A^2); rhs = -(hbar/2pi) sum coth(beta hbar w/2) Im G^r_AA over
// the non-zero lines. Reject throws ZeroFrequencyLine when A has a static
// part; Report returns it in static_weight.
FdtReport fdt_verify(const QuantumSystem& sys, std::size_t i,
                     ZeroLinePolicy policy = ZeroLinePolicy::Reject);

// ---------------------------------------------------------------- driving

struct ForceChannel {
    std::size_t observable = 0;
    std::function<double(double)> profile;
};

// F_j(t) = amplitude * exp(switch_rate * min(t, 0)) * profile_j(t)
struct DrivingProtocol {
    double amplitude = 0.0;
    double switch_rate = 0.05;
    std::vector<ForceChannel> forces;
    // simulation starts where the switch-on envelope equals this value
    double envelope_cutoff = 1e-10;

    double force(std::size_t channel, double t) const;
    double start_time() const;
};

struct LinearResponseOptions {
    std::size_t response_observable = 0;
    int samples = 200;
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
};

struct LinearResponseReport {
    std::vector<double> times;
    std::vector<double> delta_A_direct;
    std::vector<double> delta_A_convolution;
    double max_error = 0.0;
    double max_abs_response = 0.0;
    // drift of Tr(rho^2), conserved by unitary evolution
    double purity_drift = 0.0;
};

LinearResponseReport linear_response_sim(const QuantumSystem& sys, const DrivingProtocol& drive,
                                         double horizon, const LinearResponseOptions& opts = {});

struct ScalingReport {
    std::vector<double> amplitudes;
    std::vector<double> max_errors;
    std::vector<double> ratios;
    bool passed = false;
};

ScalingReport check_quadratic_scaling(const QuantumSystem& sys, const DrivingProtocol& drive,
                                      double horizon, int halvings = 2,
                                      const LinearResponseOptions& opts = {},
                                      double min_ratio = 3.5);

// Throws NonlinearRegime when check_quadratic_scaling fails.
ScalingReport require_quadratic_scaling(const QuantumSystem& sys, const DrivingProtocol& drive,
                                        double horizon, int halvings = 2,
                                        const LinearResponseOptions& opts = {});

// Drives A_j with amplitude * e^{eps t} cos(Omega t) for all t <= horizon and
// fits the simulated response of A_i to Re[chi F0 e^{-i(Omega + i eps) t}].
std::complex<double> susceptibility_from_simulation(const QuantumSystem& sys, std::size_t i,
                                                    std::size_t j, double omega, double eps,
                                                    double amplitude, double horizon,
                                                    const LinearResponseOptions& opts = {});

}  // namespace lifshitz
