#include "leojadce/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace leojadce {

SompConfig default_somp_config(std::size_t devices, double activity) {
  SompConfig cfg;
  const auto cap = static_cast<std::size_t>(std::ceil(1.5 * activity * static_cast<double>(devices) - 1e-9));
  cfg.max_support = std::clamp<std::size_t>(cap, 1, devices);
  return cfg;
}

std::vector<std::uint8_t> SompResult::active(Index devices) const {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(devices), 0);
  for (auto k : support) out[static_cast<std::size_t>(k)] = 1;
  return out;
}

SompResult somp(const CMatrix& y, const CMatrix& dictionary, const SompConfig& cfg) {
  if (y.rows() != dictionary.rows()) throw std::invalid_argument("somp: Y and A disagree on L");
  const Index k = dictionary.cols();
  if (cfg.max_support > static_cast<std::size_t>(k)) throw std::invalid_argument("somp: max_support > K");

  SompResult out;
  out.estimate = CMatrix::Zero(y.cols(), k);
  const double y_norm = y.norm();
  out.residual_norms.push_back(y_norm);
  if (y_norm == 0.0) return out;

  std::vector<bool> chosen(static_cast<std::size_t>(k), false);
  CMatrix residual = y;
  CMatrix coeffs;  // |S| x M
  while (out.support.size() < cfg.max_support) {
    if (residual.norm() <= cfg.residual_tol * y_norm) break;
    const Eigen::MatrixXd score = (dictionary.adjoint() * residual).cwiseAbs();
    const RVector total = score.rowwise().sum();
    Index best = -1;
    double best_score = -1.0;
    for (Index c = 0; c < k; ++c) {
      if (!chosen[static_cast<std::size_t>(c)] && total(c) > best_score) {
        best_score = total(c);
        best = c;
      }
    }
    if (best < 0) break;

    std::vector<Index> trial = out.support;
    trial.push_back(best);
    CMatrix sub(dictionary.rows(), static_cast<Index>(trial.size()));
    for (std::size_t i = 0; i < trial.size(); ++i) sub.col(static_cast<Index>(i)) = dictionary.col(trial[i]);
    Eigen::ColPivHouseholderQR<CMatrix> qr(sub);
    if (qr.rank() < sub.cols()) {
      out.rank_deficient = true;
      break;
    }
    coeffs = qr.solve(y);
    residual = y - sub * coeffs;
    out.support = std::move(trial);
    chosen[static_cast<std::size_t>(best)] = true;
    out.residual_norms.push_back(residual.norm());
  }

  for (std::size_t i = 0; i < out.support.size(); ++i) {
    out.estimate.col(out.support[i]) = coeffs.row(static_cast<Index>(i)).transpose();
  }
  return out;
}

AmpResult amp_mmv(const CMatrix& y, const CMatrix& dictionary, const AmpConfig& cfg) {
  if (y.rows() != dictionary.rows()) throw std::invalid_argument("amp_mmv: Y and A disagree on L");
  const Index l = dictionary.rows();
  const Index k = dictionary.cols();
  const Index m = y.cols();
  AmpResult out;
  CMatrix s = CMatrix::Zero(k, m);  // row k estimates x_k^T
  out.active.assign(static_cast<std::size_t>(k), 0);
  if (y.norm() == 0.0) {
    out.estimate = CMatrix::Zero(m, k);
    return out;
  }

  CMatrix z = y;
  const double undersampling = static_cast<double>(k) / static_cast<double>(l);
  const double start_norm = y.norm();
  for (int it = 1; it <= cfg.max_iters; ++it) {
    // Per-entry noise level; a noise-only row has norm about sigma sqrt(M).
    const double sigma = z.norm() / std::sqrt(static_cast<double>(l * m));
    const double tau = cfg.threshold_scale * sigma * std::sqrt(static_cast<double>(m));
    const CMatrix r = s + dictionary.adjoint() * z;

    CMatrix next(k, m);
    double divergence = 0.0;
    for (Index row = 0; row < k; ++row) {
      const double norm = r.row(row).norm();
      if (norm > tau) {
        const double shrink = 1.0 - tau / norm;
        next.row(row) = shrink * r.row(row);
        // Average derivative of the group soft threshold along each entry.
        divergence += shrink + (tau / norm) / static_cast<double>(2 * m);
      } else {
        next.row(row).setZero();
      }
    }
    const double onsager = undersampling * divergence / static_cast<double>(k);
    z = y - dictionary * next + onsager * z;
    const double change = (next - s).norm() / std::max(next.norm(), 1e-300);
    s = std::move(next);
    out.iterations = it;
    if (!z.allFinite() || z.norm() > 1e6 * start_norm) {
      out.diverged = true;
      break;
    }
    if (change < cfg.tol) break;
  }

  out.estimate = s.transpose();
  const Eigen::VectorXd energy = s.rowwise().squaredNorm();
  const double peak = energy.size() > 0 ? energy.maxCoeff() : 0.0;
  if (peak > 0.0) {
    for (Index row = 0; row < k; ++row) {
      out.active[static_cast<std::size_t>(row)] = energy(row) >= cfg.activity_ratio * peak ? 1 : 0;
    }
  }
  return out;
}

}  // namespace leojadce
