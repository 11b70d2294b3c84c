#include "roadmap/values/interval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace roadmap {

namespace {

// NaN bounds arise from inf-inf and similar; the sound choice is to open
// that side completely.
Interval sanitize(double lo, double hi) {
  if (std::isnan(lo)) lo = -kInf;
  if (std::isnan(hi)) hi = kInf;
  return Interval::ordered(lo, hi);
}

// 0 * inf is taken as 0: zero times any finite member of an unbounded
// interval is zero.
double mul_bound(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

double next_down(double v) { return std::isinf(v) ? v : std::nextafter(v, -kInf); }
double next_up(double v) { return std::isinf(v) ? v : std::nextafter(v, kInf); }

Interval from_corners(std::initializer_list<double> corners) {
  double lo = kInf;
  double hi = -kInf;
  bool any = false;
  for (double c : corners) {
    if (std::isnan(c)) continue;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
    any = true;
  }
  if (!any) return Interval::whole();
  return {lo, hi, false};
}

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// True if some x0 + k*2pi lies in [lo, hi]; errs towards true near the edges.
bool hits_periodic(double lo, double hi, double x0) {
  double k = std::ceil((lo - x0) / kTwoPi);
  double x = x0 + k * kTwoPi;
  double slack = 1e-12 * (1.0 + std::abs(hi));
  if (x <= hi + slack) return true;
  // Also check the previous period in case ceil() rounded past a hit.
  double prev = x - kTwoPi;
  return prev >= lo - slack && prev <= hi + slack;
}

}  // namespace

Interval Interval::ordered(double a, double b) {
  if (a > b) std::swap(a, b);
  return {a, b, false};
}

Interval operator+(const Interval& a, const Interval& b) {
  if (a.empty || b.empty) return Interval::tainted();
  return sanitize(a.lo + b.lo, a.hi + b.hi);
}

Interval operator-(const Interval& a, const Interval& b) {
  if (a.empty || b.empty) return Interval::tainted();
  return sanitize(a.lo - b.hi, a.hi - b.lo);
}

Interval operator-(const Interval& a) {
  if (a.empty) return a;
  return {-a.hi, -a.lo, false};
}

Interval operator*(const Interval& a, const Interval& b) {
  if (a.empty || b.empty) return Interval::tainted();
  return from_corners({mul_bound(a.lo, b.lo), mul_bound(a.lo, b.hi), mul_bound(a.hi, b.lo),
                       mul_bound(a.hi, b.hi)});
}

Interval reciprocal(const Interval& a) {
  if (a.empty) return a;
  if (a.lo == 0.0 && a.hi == 0.0) return Interval::tainted();
  if (a.hi == 0.0) return {-kInf, 1.0 / a.lo, false};
  if (a.lo == 0.0) return {1.0 / a.hi, kInf, false};
  if (a.lo < 0.0 && a.hi > 0.0) return Interval::whole();
  return Interval::ordered(1.0 / a.lo, 1.0 / a.hi);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (a.empty || b.empty) return Interval::tainted();
  if (b.lo > 0.0 || b.hi < 0.0) {
    // Zero-free divisor: divide the corners directly instead of going
    // through 1/b, which would round twice.
    return from_corners({a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi});
  }
  return a * reciprocal(b);
}

Interval intersect(const Interval& a, const Interval& b) {
  if (a.empty || b.empty) return Interval::tainted();
  double lo = std::max(a.lo, b.lo);
  double hi = std::min(a.hi, b.hi);
  if (lo > hi) return Interval::tainted();
  return {lo, hi, false};
}

Interval hull(const Interval& a, const Interval& b) {
  if (a.empty) return b;
  if (b.empty) return a;
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi), false};
}

Interval ival_min(const Interval& a, const Interval& b) {
  if (a.empty || b.empty) return Interval::tainted();
  return {std::min(a.lo, b.lo), std::min(a.hi, b.hi), false};
}

Interval ival_max(const Interval& a, const Interval& b) {
  if (a.empty || b.empty) return Interval::tainted();
  return {std::max(a.lo, b.lo), std::max(a.hi, b.hi), false};
}

namespace {
double pow_abs(double x, unsigned long long n) {
  // Repeated squaring on a nonnegative base keeps rounding monotone in x.
  double result = 1.0;
  double base = x;
  while (n > 0) {
    if (n & 1ULL) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

double pow_signed(double x, unsigned long long n) {
  double r = pow_abs(std::abs(x), n);
  return (x < 0.0 && (n & 1ULL)) ? -r : r;
}
}  // namespace

Interval pow_int(const Interval& base, long long n) {
  if (base.empty) return base;
  if (n == 0) return Interval::point(1.0);
  if (n < 0) return reciprocal(pow_int(base, -n));
  auto un = static_cast<unsigned long long>(n);
  if (un & 1ULL) return {pow_signed(base.lo, un), pow_signed(base.hi, un), false};
  if (base.lo >= 0.0) return {pow_abs(base.lo, un), pow_abs(base.hi, un), false};
  if (base.hi <= 0.0) return {pow_abs(-base.hi, un), pow_abs(-base.lo, un), false};
  return {0.0, std::max(pow_abs(-base.lo, un), pow_abs(base.hi, un)), false};
}

Interval pow_real(const Interval& base, const Interval& exponent) {
  if (base.empty || exponent.empty) return Interval::tainted();
  if (base.hi < 0.0) return Interval::tainted();
  double lo = std::max(base.lo, 0.0);
  double hi = base.hi;
  Interval r = from_corners({std::pow(lo, exponent.lo), std::pow(lo, exponent.hi), std::pow(hi, exponent.lo),
                             std::pow(hi, exponent.hi)});
  r = widen(r, 1);
  r.lo = std::max(r.lo, 0.0);
  return r;
}

Interval ival_sqrt(const Interval& a) {
  if (a.empty) return a;
  if (a.hi < 0.0) return Interval::tainted();
  // IEEE sqrt is correctly rounded, hence monotone: no widening needed.
  return {std::sqrt(std::max(a.lo, 0.0)), std::sqrt(a.hi), false};
}

Interval ival_exp(const Interval& a) {
  if (a.empty) return a;
  Interval r{std::exp(a.lo), std::exp(a.hi), false};
  r = widen(r, 1);
  r.lo = std::max(r.lo, 0.0);
  return r;
}

Interval ival_ln(const Interval& a) {
  if (a.empty) return a;
  if (a.hi <= 0.0) return Interval::tainted();
  double lo = a.lo <= 0.0 ? -kInf : std::log(a.lo);
  return widen({lo, std::log(a.hi), false}, 1);
}

Interval ival_log10(const Interval& a) {
  if (a.empty) return a;
  if (a.hi <= 0.0) return Interval::tainted();
  double lo = a.lo <= 0.0 ? -kInf : std::log10(a.lo);
  return widen({lo, std::log10(a.hi), false}, 1);
}

Interval ival_sin(const Interval& a) {
  if (a.empty) return a;
  if (std::isinf(a.lo) || std::isinf(a.hi) || a.hi - a.lo >= kTwoPi) return {-1.0, 1.0, false};
  double s1 = std::sin(a.lo);
  double s2 = std::sin(a.hi);
  Interval r = widen({std::min(s1, s2), std::max(s1, s2), false}, 1);
  if (hits_periodic(a.lo, a.hi, kPi / 2.0)) r.hi = 1.0;
  if (hits_periodic(a.lo, a.hi, -kPi / 2.0)) r.lo = -1.0;
  r.lo = std::max(r.lo, -1.0);
  r.hi = std::min(r.hi, 1.0);
  return r;
}

Interval ival_cos(const Interval& a) {
  if (a.empty) return a;
  if (std::isinf(a.lo) || std::isinf(a.hi) || a.hi - a.lo >= kTwoPi) return {-1.0, 1.0, false};
  double c1 = std::cos(a.lo);
  double c2 = std::cos(a.hi);
  Interval r = widen({std::min(c1, c2), std::max(c1, c2), false}, 1);
  if (hits_periodic(a.lo, a.hi, 0.0)) r.hi = 1.0;
  if (hits_periodic(a.lo, a.hi, kPi)) r.lo = -1.0;
  r.lo = std::max(r.lo, -1.0);
  r.hi = std::min(r.hi, 1.0);
  return r;
}

Interval widen(const Interval& a, int ulps) {
  if (a.empty) return a;
  Interval r = a;
  for (int i = 0; i < ulps; ++i) {
    r.lo = next_down(r.lo);
    r.hi = next_up(r.hi);
  }
  return r;
}

}  // namespace roadmap
