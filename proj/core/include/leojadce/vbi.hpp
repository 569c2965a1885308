#pragma once

// Mean-field variational Bayesian inference of the device state matrix X
// from the tensor-form received signal.
//
// Model: Y(d+1) = X (A_1 <> ... <> A_d)^T + N, columns of X are
// CN(mu_k^-1 1_M, v_k^-1 I_M), with Gamma(eps, eps) priors on mu_k, v_k and
// the noise precision beta. q(X) is matrix Gaussian with mean M_X and
// covariance 1_M (x) C_X; q(v_k), q(beta) are Gamma; q(mu_k) is handled
// through its inverse moments E[mu^-1], E[mu^-2], which have closed forms in
// terms of Gamma and 1F1.

#include <optional>
#include <vector>

#include "leojadce/signal.hpp"
#include "leojadce/tensor.hpp"
#include "leojadce/types.hpp"

namespace leojadce {

struct EngineConfig {
  double eps = 1e-6;
  int max_iters = 35;
  /// Stop when ||M_X(t) - M_X(t-1)||_F / ||M_X(t-1)||_F < rel_tol.
  double rel_tol = 1e-3;
  /// Detection threshold ratio r in (0, 1); used by callers of detect().
  double threshold_ratio = 0.2;

  /// Throws std::invalid_argument on out-of-range knobs.
  void validate() const;
};

struct PosteriorState {
  CMatrix mean;  // M_X, M x K
  CMatrix cov;   // C_X, K x K Hermitian positive definite
  RVector a_v;   // rate of q(v_k)
  double b_v = 0.0;
  RVector o_mu;  // coefficient of mu^-2 in q(mu_k)
  RVector t_mu;  // coefficient of mu^-1 in q(mu_k)
  RVector e_mu_inv;
  RVector e_mu_inv2;
  double a_beta = 0.0;
  double b_beta = 0.0;
  double eps = 0.0;
  int iter = 0;

  Index antennas() const { return mean.rows(); }
  Index devices() const { return mean.cols(); }
  double expected_beta() const { return b_beta / a_beta; }
  double expected_v(Index k) const { return b_v / a_v(k); }
  RVector expected_v() const { return (b_v / a_v.array()).matrix(); }
};

/// Quantities fixed for one received signal: the Gram matrix
/// G = hadamard_i (A_i^H A_i)^*, the Khatri-Rao dictionary, the matched
/// filter Y(d+1) KR^* and ||Y||_F^2.
struct VbiProblem {
  CMatrix gram;
  CMatrix dictionary;  // L x K
  CMatrix matched;     // M x K
  double signal_energy = 0.0;
  std::size_t length = 0;  // L
  Index antennas = 0;      // M

  Index devices() const { return gram.cols(); }
};

/// hadamard_i (A_i^H A_i)^*, which equals (KR^H KR)^* without forming KR.
CMatrix precompute_gram(const PreambleSet& p);

VbiProblem make_problem(const PreambleSet& p, const ComplexTensor& y);
/// Same, with a caller-supplied Gram matrix (used to cross-check the
/// Hadamard shortcut against the full Khatri-Rao product).
VbiProblem make_problem(const PreambleSet& p, const ComplexTensor& y, CMatrix gram);

/// Matched-filter start: M_X = Y(d+1) KR^*, C_X = I,
/// E[v_k] = M / ||M_X(:,k)||^2, zero inverse moments of mu, and
/// E[beta] = L M / ||Y||_F^2.
PosteriorState init_posterior(const VbiProblem& prob, const EngineConfig& cfg);

/// C_X = (E[beta] G + diag(E[v]))^-1,
/// M_X = (E[beta] Y(d+1) KR^* + 1_M [E[mu_k^-1] E[v_k]]_k) C_X.
/// Throws NumericalError if the system is not positive definite or the
/// result is not finite.
void update_qx(PosteriorState& s, const VbiProblem& prob);

struct MuMoments {
  double inv;   // E[mu^-1]
  double inv2;  // E[mu^-2]
};

/// Inverse moments of q(mu) ~ exp(-o mu^-2 + t mu^-1 + (eps - 1) ln mu),
/// evaluated from the Gamma / 1F1 ratio formulas in signed-log arithmetic.
/// Requires o > 0.
MuMoments mu_inverse_moments(double o, double t, double eps);

/// o_k = M E[v_k], t_k = 2 Re(sum_m M_X(m,k)) E[v_k] - eps, then the moments.
void update_qmu(PosteriorState& s);

/// a_v[k] = ||M_X(:,k)||^2 + M C_X(k,k) - 2 E[mu^-1] Re(sum_m M_X(m,k))
///          + M E[mu^-2] + eps.
/// Throws NumericalError if any a_v[k] is not positive and finite.
void update_qv(PosteriorState& s);

/// Expected residual E||Y - [[A_1..A_d, X]]||_F^2 under q(X).
double expected_residual(const PosteriorState& s, const VbiProblem& prob);

/// a_beta = F + eps with F = expected_residual(). Throws NumericalError when F
/// is negative beyond round-off.
void update_qbeta(PosteriorState& s, const VbiProblem& prob);

struct IterationTrace {
  int iter = 0;
  double residual = 0.0;        // F after the q(beta) update
  double max_col_energy = 0.0;  // max_k ||M_X(:,k)||^2
  double rel_change = 0.0;
};

struct EngineResult {
  PosteriorState state;
  std::vector<IterationTrace> trace;
  bool converged = false;
  int iterations = 0;
};

/// Runs q(X), q(mu), q(v), q(beta) sweeps until the relative change of M_X
/// drops below cfg.rel_tol or cfg.max_iters sweeps were made.
EngineResult run(const VbiProblem& prob, const EngineConfig& cfg);
EngineResult run(const PreambleSet& p, const ComplexTensor& y, const EngineConfig& cfg);

/// E[S^H S] = M_S^H M_S + sum_i C_ii for a matrix-variate Gaussian S whose
/// i-th row r_i has E[(r_i - m_i)^H (r_i - m_i)] = C_ii.
CMatrix expected_gram_moment(const CMatrix& mean, std::span<const CMatrix> diagonal_blocks);

}  // namespace leojadce
