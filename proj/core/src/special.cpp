#include "leojadce/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <math.h>

namespace leojadce {

namespace {

constexpr double kPi = std::numbers::pi;

#if defined(__SIZEOF_FLOAT128__) && defined(__GNUC__) && !defined(__clang__)
using WideFloat = __float128;
#else
using WideFloat = long double;
#endif

bool is_non_positive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

// log|Gamma(x)| for x > 0.
double log_gamma_positive(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

// log of a positive long double / wide value without leaving its range.
double log_wide(WideFloat v) {
  // Split into mantissa/exponent through long double, which covers binary128's
  // exponent range on x86-64.
  return static_cast<double>(std::log(static_cast<long double>(v)));
}

}  // namespace

SignedLogValue SignedLogValue::from(double v) {
  if (v == 0.0) return zero();
  return {std::log(std::abs(v)), v > 0.0 ? 1 : -1};
}

double SignedLogValue::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_magnitude);
}

SignedLogValue operator*(SignedLogValue a, SignedLogValue b) {
  if (a.is_zero() || b.is_zero()) return SignedLogValue::zero();
  return {a.log_magnitude + b.log_magnitude, a.sign * b.sign};
}

SignedLogValue operator/(SignedLogValue a, SignedLogValue b) {
  if (b.is_zero()) throw std::domain_error("SignedLogValue: division by zero");
  if (a.is_zero()) return SignedLogValue::zero();
  return {a.log_magnitude - b.log_magnitude, a.sign * b.sign};
}

SignedLogValue operator-(SignedLogValue a) { return {a.log_magnitude, -a.sign}; }

SignedLogValue operator+(SignedLogValue a, SignedLogValue b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.log_magnitude < b.log_magnitude) std::swap(a, b);
  const double r = std::exp(b.log_magnitude - a.log_magnitude);  // in (0, 1]
  if (a.sign == b.sign) return {a.log_magnitude + std::log1p(r), a.sign};
  if (r == 1.0) return SignedLogValue::zero();
  return {a.log_magnitude + std::log1p(-r), a.sign};
}

SignedLogValue ln_gamma_signed(double x) {
  if (!std::isfinite(x)) throw std::domain_error("ln_gamma_signed: non-finite argument");
  if (is_non_positive_integer(x)) throw std::domain_error("ln_gamma_signed: pole");
  if (x > 0.0) return {log_gamma_positive(x), 1};
  // Gamma(x) = pi / (sin(pi x) Gamma(1 - x)); 1 - x > 1 here.
  const double s = std::sin(kPi * x);
  return {std::log(kPi) - std::log(std::abs(s)) - log_gamma_positive(1.0 - x), s > 0.0 ? 1 : -1};
}

namespace {

// Large-x asymptotic expansion of 1F1, dominant exponential branch only:
//   Gamma(b)/Gamma(a) e^x x^(a-b) sum_n (b-a)_n (1-a)_n / (n! x^n).
// Returns false when the series does not reach double precision or the
// recessive branch Gamma(b)/Gamma(b-a) x^(-a) is not negligible.
bool hyp1f1_asymptotic(double a, double b, double x, SignedLogValue& out) {
  if (is_non_positive_integer(a)) return false;  // polynomial; no e^x branch
  double sum = 1.0;
  double term = 1.0;
  bool reached = false;
  for (int n = 0; n < 200; ++n) {
    const double next = term * (b - a + n) * (1.0 - a + n) / ((n + 1.0) * x);
    if (std::abs(next) > std::abs(term)) break;  // series started diverging
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) {
      reached = true;
      break;
    }
  }
  if (!reached || sum <= 0.0) return false;
  const SignedLogValue gb = ln_gamma_signed(b);
  const SignedLogValue ga = ln_gamma_signed(a);
  SignedLogValue dominant = gb / ga;
  dominant.log_magnitude += x + (a - b) * std::log(x) + std::log(sum);
  // Recessive branch magnitude (zero when b - a is a pole of Gamma).
  if (!is_non_positive_integer(b - a)) {
    const SignedLogValue gba = ln_gamma_signed(b - a);
    const double recessive = gb.log_magnitude - gba.log_magnitude - a * std::log(x);
    if (recessive > dominant.log_magnitude - 40.0) return false;
  }
  out = dominant;
  return true;
}

}  // namespace

SignedLogValue hyp1f1(double a, double b, double x) {
  if (is_non_positive_integer(b)) throw std::domain_error("hyp1f1: b is a non-positive integer");
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("hyp1f1: requires finite x >= 0");
  if (x == 0.0 || a == 0.0) return {0.0, 1};

  if (x > 500.0) {
    SignedLogValue asym;
    if (hyp1f1_asymptotic(a, b, x, asym)) return asym;
  }

  // sum = acc * exp(scale); term is kept relative to the same scale.
  double scale = 0.0;
  long double acc = 1.0L;
  long double term = 1.0L;
  constexpr long double kRescale = 1e200L;
  const double log_rescale = std::log(1e200);
  for (int n = 0; n < kHyp1f1MaxTerms; ++n) {
    const long double ratio =
        static_cast<long double>(a + n) / static_cast<long double>(b + n) * x / (n + 1.0L);
    term *= ratio;
    if (term == 0.0L) return SignedLogValue::from(static_cast<double>(acc)) *
                             SignedLogValue{scale, 1};  // terminating polynomial
    acc += term;
    if (std::abs(term) > kRescale) {
      acc /= kRescale;
      term /= kRescale;
      scale += log_rescale;
    }
    // Terms decrease monotonically once |ratio| < 1; stop when negligible.
    if (std::abs(ratio) < 1.0L && std::abs(term) <= 1e-16L * std::abs(acc)) {
      if (acc == 0.0L) return SignedLogValue::zero();
      SignedLogValue out = SignedLogValue::from(static_cast<double>(acc));
      out.log_magnitude += scale;
      return out;
    }
  }
  throw SeriesNotConverged("hyp1f1: term cap reached");
}

SignedLogValue hyp1f1_kummer(double a, double b, double x) {
  if (is_non_positive_integer(b)) throw std::domain_error("hyp1f1_kummer: b is a non-positive integer");
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("hyp1f1_kummer: requires finite x >= 0");
  if (x == 0.0) return {0.0, 1};
  const WideFloat ap = static_cast<WideFloat>(b) - static_cast<WideFloat>(a);
  const WideFloat bw = b;
  const WideFloat z = -static_cast<WideFloat>(x);
  WideFloat acc = 1;
  WideFloat term = 1;
  WideFloat peak = 1;
  for (int n = 0; n < kHyp1f1MaxTerms; ++n) {
    const WideFloat ratio = (ap + n) / (bw + n) * z / static_cast<WideFloat>(n + 1);
    term *= ratio;
    acc += term;
    const WideFloat mag = term < 0 ? -term : term;
    if (mag > peak) peak = mag;
    const WideFloat rmag = ratio < 0 ? -ratio : ratio;
    const WideFloat amag = acc < 0 ? -acc : acc;
    if (term == 0 || (rmag < 1 && mag <= static_cast<WideFloat>(1e-30) * amag)) {
      if (acc == 0) return SignedLogValue::zero();
      return {x + log_wide(amag), acc > 0 ? 1 : -1};
    }
  }
  throw SeriesNotConverged("hyp1f1_kummer: term cap reached");
}

namespace {

double bessel_series(int n, double x) {
  // sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!)
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= n; ++i) term *= half / i;
  double sum = term;
  double largest = std::abs(term);
  const double q = -half * half;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + n));
    sum += term;
    largest = std::max(largest, std::abs(term));
    if (std::abs(term) < 1e-18 * largest) break;
  }
  return sum;
}

double bessel_miller(int n, double x) {
  // Backward recurrence J_{k-1} = (2k/x) J_k - J_{k+1} from a start index well
  // above max(n, x), normalized by J_0 + 2 sum J_{2k} = 1.
  const int start = 2 * ((std::max(n, static_cast<int>(x)) + 30 +
                          static_cast<int>(std::sqrt(40.0 * std::max(n, static_cast<int>(x))))) /
                         2);
  double jp1 = 0.0;
  double j = 1e-300;
  double norm = 0.0;
  double wanted = 0.0;
  for (int k = start; k > 0; --k) {
    const double jm1 = (2.0 * k / x) * j - jp1;
    jp1 = j;
    j = jm1;
    if (k - 1 == n) wanted = j;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      norm *= 1e-250;
      wanted *= 1e-250;
    }
  }
  norm += j;  // J_0 term
  return wanted / norm;
}

}  // namespace

double bessel_j(int n, double x) {
  if (n < 0 || n > 3) throw std::domain_error("bessel_j: order must be in [0, 3]");
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("bessel_j: requires finite x >= 0");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (x <= 12.0) return bessel_series(n, x);
  return bessel_miller(n, x);
}

}  // namespace leojadce
