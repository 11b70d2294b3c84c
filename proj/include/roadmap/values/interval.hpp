#pragma once

#include <limits>

namespace roadmap {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed interval over the extended reals. An empty interval is the
/// "tainted" value: it absorbs every operation it takes part in.
///
/// Arithmetic uses round-to-nearest on the bounds. Rounding is monotone,
/// so evaluating the same operation on points drawn from the operands
/// always lands inside the result.
struct Interval {
  double lo = -kInf;
  double hi = kInf;
  bool empty = false;

  static constexpr Interval point(double v) { return {v, v, false}; }
  static constexpr Interval whole() { return {-kInf, kInf, false}; }
  static constexpr Interval tainted() { return {0.0, 0.0, true}; }
  /// Builds [a..b], swapping the bounds when a > b.
  static Interval ordered(double a, double b);

  bool is_point() const { return !empty && lo == hi; }
  bool is_whole() const { return !empty && lo == -kInf && hi == kInf; }
  bool contains(double v) const { return !empty && lo <= v && v <= hi; }
  bool contains(const Interval& o) const { return o.empty || (!empty && lo <= o.lo && o.hi <= hi); }
  double width() const { return empty ? 0.0 : hi - lo; }

  bool operator==(const Interval& o) const {
    return empty == o.empty && (empty || (lo == o.lo && hi == o.hi));
  }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
/// Division per the extended rules: a zero-containing divisor yields
/// half-lines or the whole line (the split case is joined).
Interval operator/(const Interval& a, const Interval& b);
/// 1 / [a..b] with the zero cases spelled out.
Interval reciprocal(const Interval& a);

Interval intersect(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);

Interval ival_min(const Interval& a, const Interval& b);
Interval ival_max(const Interval& a, const Interval& b);

/// Integer power by monotone-piece analysis; even powers split at zero.
Interval pow_int(const Interval& base, long long n);
/// Real power for a nonnegative base; negative parts of the base are clipped
/// and a base entirely below zero yields tainted.
Interval pow_real(const Interval& base, const Interval& exponent);

Interval ival_sqrt(const Interval& a);
Interval ival_exp(const Interval& a);
Interval ival_ln(const Interval& a);
Interval ival_log10(const Interval& a);
Interval ival_sin(const Interval& a);
Interval ival_cos(const Interval& a);

/// Widens both bounds outward by `ulps` representable steps.
Interval widen(const Interval& a, int ulps = 2);

}  // namespace roadmap
