#include "leojadce/detection.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace leojadce {

DetectionResult detect(const CMatrix& mean, double ratio, double tx_power) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("detect: ratio must be in (0, 1)");
  if (!(tx_power > 0.0)) throw std::invalid_argument("detect: tx power must be positive");
  const Index k = mean.cols();
  DetectionResult out;
  out.active.assign(static_cast<std::size_t>(k), 0);
  out.channels = CMatrix::Zero(mean.rows(), k);
  if (mean.size() == 0) return out;

  const double peak = mean.cwiseAbs().maxCoeff();
  const double scaled = ratio * peak;
  out.threshold = static_cast<double>(mean.rows()) * scaled * scaled;
  if (peak == 0.0) return out;

  const double inv_amp = 1.0 / std::sqrt(tx_power);
  for (Index c = 0; c < k; ++c) {
    if (mean.col(c).squaredNorm() >= out.threshold) {
      out.active[static_cast<std::size_t>(c)] = 1;
      out.channels.col(c) = mean.col(c) * inv_amp;
    }
  }
  return out;
}

double error_probability(std::span<const std::uint8_t> estimated, std::span<const std::uint8_t> truth) {
  if (estimated.size() != truth.size()) throw std::invalid_argument("error_probability: length mismatch");
  if (truth.empty()) return 0.0;
  std::size_t errors = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) errors += (estimated[i] != 0) != (truth[i] != 0);
  return static_cast<double>(errors) / static_cast<double>(truth.size());
}

double nmse(const CMatrix& estimate, const CMatrix& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
    throw std::invalid_argument("nmse: shape mismatch");
  }
  const double ref = truth.squaredNorm();
  if (ref == 0.0) throw std::invalid_argument("nmse: ground truth is zero");
  return (estimate - truth).squaredNorm() / ref;
}

double nmse_active(const CMatrix& estimate, const CMatrix& truth, std::span<const std::uint8_t> active) {
  if (static_cast<Index>(active.size()) != truth.cols()) throw std::invalid_argument("nmse_active: length mismatch");
  double err = 0.0;
  double ref = 0.0;
  for (Index c = 0; c < truth.cols(); ++c) {
    if (active[static_cast<std::size_t>(c)] == 0) continue;
    err += (estimate.col(c) - truth.col(c)).squaredNorm();
    ref += truth.col(c).squaredNorm();
  }
  if (ref == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return err / ref;
}

}  // namespace leojadce
