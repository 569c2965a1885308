#pragma once

// Dense complex multilinear algebra.
//
// Index convention (used everywhere in the library): a tensor with dims
// (l_1, ..., l_d, M) stores entry (i_1, ..., i_d, m) at
//
//     ((...((i_1 * l_2 + i_2) * l_3 + ...) * l_d + i_d) * M + m
//
// i.e. the first mode varies slowest and the last mode fastest. With this
// order vec(a_1 o a_2 o ... o a_d) == a_1 (x) a_2 (x) ... (x) a_d, and the
// mode-(d+1) unfolding is a zero-copy column-major M x (l_1 ... l_d) view.

#include <cstddef>
#include <span>
#include <vector>

#include "leojadce/types.hpp"

namespace leojadce {

class ComplexTensor {
 public:
  ComplexTensor() = default;
  /// Zero tensor with the given dims.
  explicit ComplexTensor(std::vector<std::size_t> dims);
  ComplexTensor(std::vector<std::size_t> dims, std::vector<Complex> data);

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t order() const { return dims_.size(); }
  std::size_t size() const { return data_.size(); }
  /// Extent of the last mode (the antenna count M for received signals).
  std::size_t last_extent() const { return dims_.empty() ? 0 : dims_.back(); }
  /// Product of all but the last extent.
  std::size_t leading_size() const;

  std::span<const Complex> data() const { return data_; }
  std::span<Complex> data() { return data_; }

  std::size_t linear_index(std::span<const std::size_t> idx) const;
  const Complex& operator()(std::span<const std::size_t> idx) const {
    return data_[linear_index(idx)];
  }
  Complex& operator()(std::span<const std::size_t> idx) {
    return data_[linear_index(idx)];
  }

  double squared_norm() const;

 private:
  std::vector<std::size_t> dims_;
  std::vector<Complex> data_;
};

/// The known preamble factors A_1..A_d, each l_i x K.
class FactorMatrices {
 public:
  FactorMatrices() = default;
  /// Throws std::invalid_argument unless d >= 2 and all factors share K.
  explicit FactorMatrices(std::vector<CMatrix> factors);

  std::size_t order() const { return factors_.size(); }
  Index columns() const { return factors_.empty() ? 0 : factors_.front().cols(); }
  const CMatrix& operator[](std::size_t i) const { return factors_[i]; }
  const std::vector<CMatrix>& factors() const { return factors_; }
  std::vector<std::size_t> extents() const;
  std::size_t total_length() const;

 private:
  std::vector<CMatrix> factors_;
};

/// Device state matrix X (M x K); column k is alpha_k sqrt(xi_k) h_k^H and
/// is exactly zero for inactive devices.
using DeviceStateMatrix = CMatrix;

/// out[i*q + j] = a[i] * b[j].
CVector kron(const CVector& a, const CVector& b);

/// Column-wise Kronecker product, A_1 first. All inputs must share K.
CMatrix khatri_rao(std::span<const CMatrix> mats);

/// Entry-wise product of equally shaped matrices.
CMatrix hadamard(std::span<const CMatrix> mats);

/// sum_k a_{1,k} o ... o a_{d,k} o x_k, dims (l_1, ..., l_d, M).
ComplexTensor kruskal(const FactorMatrices& factors, const DeviceStateMatrix& x);

/// Mode-(d+1) unfolding: M x (l_1 ... l_d). Requires order >= 3.
CMatrix unfold_last(const ComplexTensor& t);

/// Inverse of unfold_last for the given dims.
ComplexTensor fold_last(const CMatrix& unfolded, std::vector<std::size_t> dims);

}  // namespace leojadce
