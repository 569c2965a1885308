#include "leojadce/tensor.hpp"

#include <functional>
#include <numeric>
#include <stdexcept>

namespace leojadce {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void check_dims(const std::vector<std::size_t>& dims) {
  if (dims.empty()) throw std::invalid_argument("tensor: empty dims");
  for (auto d : dims) {
    if (d == 0) throw std::invalid_argument("tensor: zero extent");
  }
}

}  // namespace

ComplexTensor::ComplexTensor(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  check_dims(dims_);
  data_.assign(product(dims_), Complex{0.0, 0.0});
}

ComplexTensor::ComplexTensor(std::vector<std::size_t> dims, std::vector<Complex> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  check_dims(dims_);
  if (data_.size() != product(dims_)) {
    throw std::invalid_argument("tensor: data length does not match dims");
  }
}

std::size_t ComplexTensor::leading_size() const {
  if (dims_.empty()) return 0;
  return data_.size() / dims_.back();
}

std::size_t ComplexTensor::linear_index(std::span<const std::size_t> idx) const {
  if (idx.size() != dims_.size()) throw std::out_of_range("tensor: index rank mismatch");
  std::size_t lin = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= dims_[i]) throw std::out_of_range("tensor: index out of range");
    lin = lin * dims_[i] + idx[i];
  }
  return lin;
}

double ComplexTensor::squared_norm() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return s;
}

FactorMatrices::FactorMatrices(std::vector<CMatrix> factors) : factors_(std::move(factors)) {
  if (factors_.size() < 2) throw std::invalid_argument("factor matrices: order must be >= 2");
  const Index k = factors_.front().cols();
  for (const auto& a : factors_) {
    if (a.cols() != k) throw std::invalid_argument("factor matrices: column counts differ");
    if (a.rows() == 0) throw std::invalid_argument("factor matrices: empty factor");
  }
}

std::vector<std::size_t> FactorMatrices::extents() const {
  std::vector<std::size_t> out;
  out.reserve(factors_.size());
  for (const auto& a : factors_) out.push_back(static_cast<std::size_t>(a.rows()));
  return out;
}

std::size_t FactorMatrices::total_length() const { return product(extents()); }

CVector kron(const CVector& a, const CVector& b) {
  if (a.size() == 0 || b.size() == 0) throw std::invalid_argument("kron: empty input");
  CVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

CMatrix khatri_rao(std::span<const CMatrix> mats) {
  if (mats.empty()) throw std::invalid_argument("khatri_rao: no inputs");
  const Index k = mats.front().cols();
  Index rows = 1;
  for (const auto& m : mats) {
    if (m.cols() != k) throw std::invalid_argument("khatri_rao: column counts differ");
    rows *= m.rows();
  }
  CMatrix out(rows, k);
  for (Index c = 0; c < k; ++c) {
    CVector col = mats.front().col(c);
    for (std::size_t i = 1; i < mats.size(); ++i) col = kron(col, mats[i].col(c));
    out.col(c) = col;
  }
  return out;
}

CMatrix hadamard(std::span<const CMatrix> mats) {
  if (mats.empty()) throw std::invalid_argument("hadamard: no inputs");
  CMatrix out = mats.front();
  for (std::size_t i = 1; i < mats.size(); ++i) {
    if (mats[i].rows() != out.rows() || mats[i].cols() != out.cols()) {
      throw std::invalid_argument("hadamard: shape mismatch");
    }
    out.array() *= mats[i].array();
  }
  return out;
}

ComplexTensor kruskal(const FactorMatrices& factors, const DeviceStateMatrix& x) {
  if (x.cols() != factors.columns()) {
    throw std::invalid_argument("kruskal: X and factors disagree on K");
  }
  const CMatrix kr = khatri_rao(factors.factors());
  auto dims = factors.extents();
  dims.push_back(static_cast<std::size_t>(x.rows()));
  return fold_last(x * kr.transpose(), std::move(dims));
}

CMatrix unfold_last(const ComplexTensor& t) {
  if (t.order() < 3) throw std::invalid_argument("unfold_last: order must be >= 3");
  const auto m = static_cast<Index>(t.last_extent());
  const auto p = static_cast<Index>(t.leading_size());
  return Eigen::Map<const CMatrix>(t.data().data(), m, p);
}

ComplexTensor fold_last(const CMatrix& unfolded, std::vector<std::size_t> dims) {
  check_dims(dims);
  if (static_cast<std::size_t>(unfolded.rows()) != dims.back() ||
      static_cast<std::size_t>(unfolded.size()) != product(dims)) {
    throw std::invalid_argument("fold_last: shape mismatch");
  }
  std::vector<Complex> data(unfolded.data(), unfolded.data() + unfolded.size());
  return ComplexTensor(std::move(dims), std::move(data));
}

}  // namespace leojadce
