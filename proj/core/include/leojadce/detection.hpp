#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "leojadce/types.hpp"

namespace leojadce {

struct DetectionResult {
  std::vector<std::uint8_t> active;  // alpha_hat
  double threshold = 0.0;            // theta
  CMatrix channels;                  // h_hat, M x K; zero for undetected devices
};

/// theta = M (r max_{m,n} |M_X(m,n)|)^2; device k is declared active iff
/// ||M_X(:,k)||^2 >= theta, and its channel estimate is M_X(:,k)/sqrt(xi).
/// An all-zero M_X yields no detections.
DetectionResult detect(const CMatrix& mean, double ratio, double tx_power);

/// (misses + false alarms) / K.
double error_probability(std::span<const std::uint8_t> estimated, std::span<const std::uint8_t> truth);

/// ||X_hat - X||_F^2 / ||X||_F^2. Throws std::invalid_argument for X == 0.
double nmse(const CMatrix& estimate, const CMatrix& truth);

/// NMSE restricted to the truly active columns; NaN when none is active.
double nmse_active(const CMatrix& estimate, const CMatrix& truth, std::span<const std::uint8_t> active);

}  // namespace leojadce
