#include "leojadce/signal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace leojadce {

PreambleSet gen_preambles(std::span<const std::size_t> dims, std::size_t devices, Rng& rng) {
  if (dims.size() < 2) throw std::invalid_argument("gen_preambles: need d >= 2");
  if (devices == 0) throw std::invalid_argument("gen_preambles: need K >= 1");
  for (auto l : dims) {
    if (l < 2) throw std::invalid_argument("gen_preambles: every l_i must be >= 2");
  }
  std::vector<CMatrix> factors;
  factors.reserve(dims.size());
  for (auto l : dims) {
    CMatrix a(static_cast<Index>(l), static_cast<Index>(devices));
    for (Index k = 0; k < a.cols(); ++k) {
      for (Index i = 0; i < a.rows(); ++i) a(i, k) = complex_normal(rng);
      a.col(k).normalize();
    }
    factors.push_back(std::move(a));
  }
  return PreambleSet{FactorMatrices(std::move(factors))};
}

CMatrix assemble_preamble_matrix(const PreambleSet& p) { return khatri_rao(p.factors.factors()); }

ComplexTensor synthesize_received(const PreambleSet& p, const DeviceStateMatrix& x,
                                  double noise_var, Rng& rng) {
  if (x.cols() != p.devices()) throw std::invalid_argument("synthesize_received: K mismatch");
  if (!(noise_var >= 0.0)) throw std::invalid_argument("synthesize_received: negative noise variance");
  ComplexTensor y = kruskal(p.factors, x);
  if (noise_var > 0.0) {
    for (auto& v : y.data()) v += complex_normal(rng, noise_var);
  }
  return y;
}

CMatrix received_matrix(const ComplexTensor& y) { return unfold_last(y).transpose(); }

double noise_variance(double tx_power, double snr_db) { return tx_power * std::pow(10.0, -snr_db / 10.0); }

namespace {

// Balanced split: pick the divisor closest to length^(1/order) from above
// that leaves a factorizable remainder; larger factors first.
std::optional<std::vector<std::size_t>> balanced(std::size_t length, std::size_t order) {
  if (order == 1) {
    if (length >= 2) return std::vector<std::size_t>{length};
    return std::nullopt;
  }
  const double target = std::pow(static_cast<double>(length), 1.0 / static_cast<double>(order));
  std::vector<std::size_t> divisors;
  for (std::size_t f = 2; f <= length / 2; ++f) {
    if (length % f == 0) divisors.push_back(f);
  }
  std::sort(divisors.begin(), divisors.end(), [&](std::size_t a, std::size_t b) {
    const double da = std::abs(std::log(a / target));
    const double db = std::abs(std::log(b / target));
    return da != db ? da < db : a > b;
  });
  for (auto f : divisors) {
    if (auto rest = balanced(length / f, order - 1)) {
      rest->insert(rest->begin(), f);
      std::sort(rest->begin(), rest->end(), std::greater<>());
      return rest;
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::size_t> default_factorization(std::size_t length, std::size_t order) {
  static const std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> kTable = {
      {{400, 2}, {20, 20}},   {{225, 2}, {15, 15}},      {{225, 3}, {9, 5, 5}},
      {{225, 4}, {5, 5, 3, 3}}, {{200, 2}, {20, 10}},
  };
  if (order < 2) throw std::invalid_argument("default_factorization: order must be >= 2");
  if (auto it = kTable.find({length, order}); it != kTable.end()) return it->second;
  if (auto f = balanced(length, order)) return *f;
  throw std::invalid_argument("default_factorization: " + std::to_string(length) +
                              " has no factorization into " + std::to_string(order) +
                              " factors >= 2");
}

}  // namespace leojadce
