#include "leojadce/vbi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "leojadce/special.hpp"

namespace leojadce {

void EngineConfig::validate() const {
  if (!(eps > 0.0 && eps <= 1e-2)) throw std::invalid_argument("engine: eps must be in (0, 1e-2]");
  if (max_iters < 1) throw std::invalid_argument("engine: max_iters must be >= 1");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("engine: rel_tol must be positive");
  if (!(threshold_ratio > 0.0 && threshold_ratio < 1.0)) {
    throw std::invalid_argument("engine: threshold ratio must be in (0, 1)");
  }
}

CMatrix precompute_gram(const PreambleSet& p) {
  std::vector<CMatrix> grams;
  grams.reserve(p.factors.order());
  for (const auto& a : p.factors.factors()) grams.push_back((a.adjoint() * a).conjugate());
  return hadamard(grams);
}

VbiProblem make_problem(const PreambleSet& p, const ComplexTensor& y) {
  return make_problem(p, y, precompute_gram(p));
}

VbiProblem make_problem(const PreambleSet& p, const ComplexTensor& y, CMatrix gram) {
  if (y.order() != p.factors.order() + 1) throw std::invalid_argument("vbi: tensor order mismatch");
  const auto extents = p.factors.extents();
  for (std::size_t i = 0; i < extents.size(); ++i) {
    if (y.dims()[i] != extents[i]) throw std::invalid_argument("vbi: tensor dims do not match preambles");
  }
  if (gram.rows() != p.devices() || gram.cols() != p.devices()) {
    throw std::invalid_argument("vbi: Gram matrix must be K x K");
  }
  VbiProblem prob;
  prob.gram = std::move(gram);
  prob.dictionary = assemble_preamble_matrix(p);
  prob.matched = unfold_last(y) * prob.dictionary.conjugate();
  prob.signal_energy = y.squared_norm();
  prob.length = p.length();
  prob.antennas = static_cast<Index>(y.last_extent());
  return prob;
}

PosteriorState init_posterior(const VbiProblem& prob, const EngineConfig& cfg) {
  const Index k = prob.devices();
  const Index m = prob.antennas;
  const double observations = static_cast<double>(prob.length) * static_cast<double>(m);
  PosteriorState s;
  s.eps = cfg.eps;
  s.mean = prob.matched;
  s.cov = CMatrix::Identity(k, k);
  s.b_v = static_cast<double>(m) + cfg.eps;
  // Prior precision E[v_k] = M / ||matched(:,k)||^2: weak matched-filter
  // columns start strongly shrunk, which removes most of the first sweeps.
  s.a_v.resize(k);
  for (Index j = 0; j < k; ++j) {
    s.a_v(j) = s.b_v * std::max(prob.matched.col(j).squaredNorm() / static_cast<double>(m), cfg.eps);
  }
  s.o_mu = RVector::Zero(k);
  s.t_mu = RVector::Zero(k);
  s.e_mu_inv = RVector::Zero(k);
  s.e_mu_inv2 = RVector::Zero(k);
  s.b_beta = observations + cfg.eps;
  const double energy = prob.signal_energy > 0.0 ? prob.signal_energy : cfg.eps;
  s.a_beta = s.b_beta * energy / observations;
  s.iter = 0;
  return s;
}

void update_qx(PosteriorState& s, const VbiProblem& prob) {
  const Index k = prob.devices();
  const double beta = s.expected_beta();
  const RVector ev = s.expected_v();

  CMatrix precision = beta * prob.gram;
  precision.diagonal().real() += ev;
  Eigen::LLT<CMatrix> llt(precision);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("update_qx: posterior precision is not positive definite");
  }

  CMatrix rhs = beta * prob.matched;
  const RVector prior_shift = s.e_mu_inv.cwiseProduct(ev);
  rhs.rowwise() += prior_shift.cast<Complex>().transpose();

  // M_X = rhs C  <=>  M_X^H = C rhs^H.
  s.mean = llt.solve(rhs.adjoint()).adjoint();
  s.cov = llt.solve(CMatrix::Identity(k, k));
  s.cov = 0.5 * (s.cov + s.cov.adjoint()).eval();

  if (!s.mean.allFinite() || !s.cov.allFinite()) {
    throw NumericalError("update_qx: non-finite posterior statistics");
  }
}

MuMoments mu_inverse_moments(double o, double t, double eps) {
  if (!(o > 0.0) || !std::isfinite(o) || !std::isfinite(t)) {
    throw NumericalError("mu_inverse_moments: requires finite o > 0 and finite t");
  }
  const double z = t * t / (4.0 * o);
  const SignedLogValue tt = SignedLogValue::from(t);
  const SignedLogValue root_o = SignedLogValue::from(std::sqrt(o));
  const SignedLogValue oo = SignedLogValue::from(o);

  const SignedLogValue g_neg = ln_gamma_signed(-eps / 2.0);
  const SignedLogValue g_half = ln_gamma_signed((1.0 - eps) / 2.0);
  const SignedLogValue g_one = ln_gamma_signed(1.0 - eps / 2.0);
  const SignedLogValue g_three_half = ln_gamma_signed((3.0 - eps) / 2.0);

  // Normalizer (up to a common factor) of the analytically continued density.
  const SignedLogValue denom = oo * g_neg * hyp1f1(-eps / 2.0, 0.5, z) +
                               root_o * tt * g_half * hyp1f1((1.0 - eps) / 2.0, 1.5, z);
  if (denom.is_zero()) throw NumericalError("mu_inverse_moments: vanishing normalizer");

  const SignedLogValue first = tt * g_one * hyp1f1(1.0 - eps / 2.0, 1.5, z) +
                               root_o * g_half * hyp1f1((1.0 - eps) / 2.0, 0.5, z);
  const SignedLogValue second = root_o * g_one * hyp1f1(1.0 - eps / 2.0, 0.5, z) +
                                tt * g_three_half * hyp1f1((3.0 - eps) / 2.0, 1.5, z);

  MuMoments out{(first / denom).value(), (second / (root_o * denom)).value()};
  if (!std::isfinite(out.inv) || !std::isfinite(out.inv2)) {
    throw NumericalError("mu_inverse_moments: non-finite moment");
  }
  return out;
}

void update_qmu(PosteriorState& s) {
  const double m = static_cast<double>(s.antennas());
  const Index k = s.devices();
  s.o_mu.resize(k);
  s.t_mu.resize(k);
  s.e_mu_inv.resize(k);
  s.e_mu_inv2.resize(k);
  for (Index c = 0; c < k; ++c) {
    const double ev = s.expected_v(c);
    const double col_sum = s.mean.col(c).sum().real();
    s.o_mu(c) = m * ev;
    s.t_mu(c) = 2.0 * col_sum * ev - s.eps;
    const MuMoments mom = mu_inverse_moments(s.o_mu(c), s.t_mu(c), s.eps);
    s.e_mu_inv(c) = mom.inv;
    s.e_mu_inv2(c) = mom.inv2;
  }
}

void update_qv(PosteriorState& s) {
  const double m = static_cast<double>(s.antennas());
  for (Index c = 0; c < s.devices(); ++c) {
    const double col_sum = s.mean.col(c).sum().real();
    const double a = s.mean.col(c).squaredNorm() + m * s.cov(c, c).real() -
                     2.0 * s.e_mu_inv(c) * col_sum + m * s.e_mu_inv2(c) + s.eps;
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw NumericalError("update_qv: non-positive rate for device " + std::to_string(c));
    }
    s.a_v(c) = a;
  }
}

double expected_residual(const PosteriorState& s, const VbiProblem& prob) {
  const double m = static_cast<double>(s.antennas());
  // Tr(G M_X^H M_X) = sum over rows r of r G r^H.
  const double fit = (s.mean * prob.gram).cwiseProduct(s.mean.conjugate()).sum().real();
  const double spread = m * prob.gram.cwiseProduct(s.cov.transpose()).sum().real();
  const double cross = 2.0 * s.mean.cwiseProduct(prob.matched.conjugate()).sum().real();
  return prob.signal_energy - cross + fit + spread;
}

void update_qbeta(PosteriorState& s, const VbiProblem& prob) {
  double f = expected_residual(s, prob);
  if (!std::isfinite(f)) throw NumericalError("update_qbeta: non-finite residual");
  // F >= 0 analytically; allow round-off relative to the energies involved.
  const double slack = 1e-8 * std::max(1.0, prob.signal_energy);
  if (f < -slack) throw NumericalError("update_qbeta: negative expected residual");
  s.a_beta = std::max(f, 0.0) + s.eps;
}

EngineResult run(const VbiProblem& prob, const EngineConfig& cfg) {
  cfg.validate();
  EngineResult out;
  out.state = init_posterior(prob, cfg);
  PosteriorState& s = out.state;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const CMatrix previous = s.mean;
    update_qx(s, prob);
    update_qmu(s);
    update_qv(s);
    update_qbeta(s, prob);
    s.iter = it;

    const double prev_norm = previous.norm();
    const double diff = (s.mean - previous).norm();
    double rel = 0.0;
    if (prev_norm > 0.0) {
      rel = diff / prev_norm;
    } else if (diff > 0.0) {
      rel = std::numeric_limits<double>::infinity();
    }
    out.trace.push_back({it, s.a_beta - s.eps, s.mean.colwise().squaredNorm().maxCoeff(), rel});
    out.iterations = it;
    if (rel < cfg.rel_tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

EngineResult run(const PreambleSet& p, const ComplexTensor& y, const EngineConfig& cfg) {
  return run(make_problem(p, y), cfg);
}

CMatrix expected_gram_moment(const CMatrix& mean, std::span<const CMatrix> diagonal_blocks) {
  if (static_cast<Index>(diagonal_blocks.size()) != mean.rows()) {
    throw std::invalid_argument("expected_gram_moment: need one covariance block per row");
  }
  CMatrix out = mean.adjoint() * mean;
  for (const auto& c : diagonal_blocks) {
    if (c.rows() != mean.cols() || c.cols() != mean.cols()) {
      throw std::invalid_argument("expected_gram_moment: blocks must be K x K");
    }
    out += c;
  }
  return out;
}

}  // namespace leojadce
