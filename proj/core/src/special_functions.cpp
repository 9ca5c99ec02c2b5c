#include "physbc/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "physbc/error.hpp"

namespace physbc {

namespace {

// Remainder of Stirling's series, lgamma(x) - [(x - 1/2) ln x - x + ln(2 pi)/2], x >= 10.
double stirling_tail(double x) {
  const double r = 1.0 / x;
  const double r2 = r * r;
  return r * (1.0 / 12.0 -
              r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 * (1.0 / 1680.0 - r2 / 1188.0))));
}

void check_shape(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    fail(ErrorKind::kDomain, "beta parameters must be finite and positive (got " +
                                 std::to_string(a) + ", " + std::to_string(b) + ")");
  }
}

// Modified Lentz evaluation of the incomplete-beta continued fraction.
// xc = 1 - x is passed separately because the leading term cancels to
// roughly 1 - x when b is near 1, and x may itself be a rounded 1 - x0.
double beta_fraction(double x, double xc, double a, double b) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = x > 0.5 ? ((1.0 - b) + qab * xc) / qap : 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 200000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  fail(ErrorKind::kInternal, "incomplete beta continued fraction did not converge");
}

}  // namespace

double log_beta(double a, double b) {
  check_shape(a, b);
  if (a > b) std::swap(a, b);
  if (b < 10.0) return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double ab = a + b;
  if (a < 10.0) {
    // lgamma(b) - lgamma(a + b) without cancellation.
    const double ratio = -(b - 0.5) * std::log1p(a / b) - a * std::log(ab) + a +
                         stirling_tail(b) - stirling_tail(ab);
    return std::lgamma(a) + ratio;
  }
  return 0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * std::log(ab) -
         (a - 0.5) * std::log1p(b / a) - (b - 0.5) * std::log1p(a / b) + stirling_tail(a) +
         stirling_tail(b) - stirling_tail(ab);
}

double beta_inc(double x, double a, double b) {
  check_shape(a, b);
  if (!(x >= 0.0 && x <= 1.0)) {
    fail(ErrorKind::kDomain, "incomplete beta argument must lie in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(x, 1.0 - x, a, b) / a;
  return 1.0 - front * beta_fraction(1.0 - x, x, b, a) / b;
}

double beta_density(double x, double a, double b) {
  check_shape(a, b);
  if (!(x >= 0.0 && x <= 1.0)) fail(ErrorKind::kDomain, "beta density argument outside [0, 1]");
  if (x == 0.0) return a < 1.0 ? std::numeric_limits<double>::infinity() : (a == 1.0 ? std::exp(-log_beta(a, b)) : 0.0);
  if (x == 1.0) return b < 1.0 ? std::numeric_limits<double>::infinity() : (b == 1.0 ? std::exp(-log_beta(a, b)) : 0.0);
  return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta(a, b));
}

double beta_inc_inv(double p, double a, double b) {
  check_shape(a, b);
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::kDomain, "probability must lie in [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  double lo = 0.0, hi = 1.0;
  double x = 0.5;
  for (int it = 0; it < 2000 && hi - lo > 1e-3 * hi; ++it) {
    x = 0.5 * (lo + hi);
    if (beta_inc(x, a, b) < p) lo = x; else hi = x;
  }
  x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = beta_inc(x, a, b) - p;
    if (f == 0.0) return x;
    if (f < 0.0) lo = x; else hi = x;
    const double slope = beta_density(x, a, b);
    double next = slope > 0.0 && std::isfinite(slope) ? x - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * x) return next;
    x = next;
  }
  return x;
}

}  // namespace physbc
