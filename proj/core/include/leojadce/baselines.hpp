#pragma once

// Reference JADCE solvers operating on the matrix form Y = A X^T (L x M)
// with the assembled L x K preamble dictionary; they do not see the tensor
// structure.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "leojadce/types.hpp"

namespace leojadce {

struct SompConfig {
  std::size_t max_support = 0;
  /// Stop once ||R||_F / ||Y||_F falls below this.
  double residual_tol = 1e-6;
};

/// max_support = ceil(1.5 p_a K), clamped to [1, K].
SompConfig default_somp_config(std::size_t devices, double activity);

struct SompResult {
  std::vector<Index> support;        // in selection order
  CMatrix estimate;                  // M x K, zero off-support
  std::vector<double> residual_norms;  // ||R||_F after each selection, starting with ||Y||_F
  bool rank_deficient = false;

  std::vector<std::uint8_t> active(Index devices) const;
};

/// Simultaneous OMP: select argmax_k sum_m |A(:,k)^H R(:,m)|, refit by least
/// squares on the support, update the residual.
SompResult somp(const CMatrix& y, const CMatrix& dictionary, const SompConfig& cfg);

struct AmpConfig {
  int max_iters = 50;
  /// Threshold multiplier on the estimated effective noise level.
  double threshold_scale = 1.5;
  double tol = 1e-6;
  /// Rows whose final estimate has energy above this fraction of the largest
  /// row are declared active.
  double activity_ratio = 0.1;
};

struct AmpResult {
  CMatrix estimate;  // M x K
  std::vector<std::uint8_t> active;
  int iterations = 0;
  bool diverged = false;
};

/// AMP with a row-group soft threshold for multiple measurement vectors.
AmpResult amp_mmv(const CMatrix& y, const CMatrix& dictionary, const AmpConfig& cfg);

}  // namespace leojadce
