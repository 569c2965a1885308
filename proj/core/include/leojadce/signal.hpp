#pragma once

// Tensor-structured preambles and received-signal synthesis.

#include <cstddef>
#include <span>
#include <vector>

#include "leojadce/rng.hpp"
#include "leojadce/tensor.hpp"

namespace leojadce {

struct PreambleSet {
  FactorMatrices factors;

  std::size_t length() const { return factors.total_length(); }
  Index devices() const { return factors.columns(); }
};

/// Each a_{i,k} is i.i.d. circular complex Gaussian, normalized to unit norm.
/// Requires d >= 2 and every l_i >= 2.
PreambleSet gen_preambles(std::span<const std::size_t> dims, std::size_t devices, Rng& rng);

/// L x K matrix whose k-th column is a_{1,k} (x) ... (x) a_{d,k}.
CMatrix assemble_preamble_matrix(const PreambleSet& p);

/// kruskal(factors, X) plus i.i.d. CN(0, noise_var) noise per entry.
ComplexTensor synthesize_received(const PreambleSet& p, const DeviceStateMatrix& x,
                                  double noise_var, Rng& rng);

/// Matrix form (L x M) of a received tensor: the transpose of its mode-(d+1)
/// unfolding, so that Y = A X^T for the assembled preamble matrix A.
CMatrix received_matrix(const ComplexTensor& y);

/// sigma_n^2 = xi 10^(-SNR/10).
double noise_variance(double tx_power, double snr_db);

/// Factorization of L into d factors >= 2. The scenarios used in the
/// experiments have fixed entries (400 -> 20x20, 225 -> 15x15 / 9x5x5 /
/// 5x5x3x3, 200 -> 20x10); other lengths get a balanced factorization.
/// Throws std::invalid_argument if none exists.
std::vector<std::size_t> default_factorization(std::size_t length, std::size_t order);

}  // namespace leojadce
