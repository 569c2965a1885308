#pragma once

// Special functions needed by the posterior moment formulas and the satellite
// antenna pattern. Gamma and 1F1 values are returned in signed-log form:
// with eps ~ 1e-6, Gamma(-eps/2) ~ -2/eps while the moment ratios that use it
// are O(1), and 1F1 grows like e^x.

#include <stdexcept>
#include <string>

namespace leojadce {

/// sign * exp(log_magnitude); sign == 0 encodes an exact zero.
struct SignedLogValue {
  double log_magnitude = 0.0;
  int sign = 1;

  static SignedLogValue zero() { return {0.0, 0}; }
  static SignedLogValue from(double v);

  bool is_zero() const { return sign == 0; }
  double value() const;
};

SignedLogValue operator*(SignedLogValue a, SignedLogValue b);
SignedLogValue operator/(SignedLogValue a, SignedLogValue b);
SignedLogValue operator+(SignedLogValue a, SignedLogValue b);
SignedLogValue operator-(SignedLogValue a);
inline SignedLogValue operator-(SignedLogValue a, SignedLogValue b) { return a + (-b); }

class SeriesNotConverged : public std::runtime_error {
 public:
  explicit SeriesNotConverged(const std::string& what) : std::runtime_error(what) {}
};

/// sign(Gamma(x)) and log|Gamma(x)|. Negative arguments use the reflection
/// formula. Throws std::domain_error at the poles 0, -1, -2, ...
SignedLogValue ln_gamma_signed(double x);

/// Term cap shared by the 1F1 series.
inline constexpr int kHyp1f1MaxTerms = 10000;

/// Kummer's confluent hypergeometric function 1F1(a; b; x) for x >= 0.
///
/// Summed from the Pochhammer series with a running log scale (all terms
/// past the first share one sign whenever a > -1, so the positive-argument
/// series has no cancellation). Very large x switches to the asymptotic
/// expansion once it is accurate to double precision. Throws
/// SeriesNotConverged when the term cap is hit, std::domain_error when b is
/// a non-positive integer or x < 0.
SignedLogValue hyp1f1(double a, double b, double x);

/// The same function through Kummer's transformation,
/// 1F1(a; b; x) = e^x 1F1(b - a; b; -x), whose alternating series is summed
/// in extended precision (binary128 where the compiler has it). Loses about
/// x / ln(10) digits to cancellation; provided as an independent route for
/// cross-checks at moderate x.
SignedLogValue hyp1f1_kummer(double a, double b, double x);

/// Bessel function of the first kind J_n(x) for n in {0, 1, 2, 3} and x >= 0.
/// Ascending series for x <= 12, Miller's normalized backward recurrence
/// beyond.
double bessel_j(int n, double x);

}  // namespace leojadce
