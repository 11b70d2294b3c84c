#pragma once

// Independent reference computations used to check the library. Nothing in
// here calls into the interval implementation under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

struct Box {
  double lo;
  double hi;
};

/// Points spread over [lo, hi] including both ends.
inline std::vector<double> sample_points(Box b, int n = 9) {
  std::vector<double> out;
  if (b.lo == b.hi) return {b.lo};
  for (int i = 0; i < n; ++i) out.push_back(b.lo + (b.hi - b.lo) * i / (n - 1));
  return out;
}

/// Hull of f over a grid of sample points from both operands.
inline Box sampled_hull(Box a, Box b, const std::function<double(double, double)>& f, int n = 9) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : sample_points(a, n))
    for (double y : sample_points(b, n)) {
      double v = f(x, y);
      if (std::isnan(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  return {lo, hi};
}

/// Truth values as sets of booleans: false={0}, maybe={0,1}, true={1}.
inline std::vector<int> truth_set(int t) {
  if (t == 0) return {0};
  if (t == 2) return {1};
  return {0, 1};
}

inline int truth_from_set(const std::vector<int>& s) {
  bool has0 = std::find(s.begin(), s.end(), 0) != s.end();
  bool has1 = std::find(s.begin(), s.end(), 1) != s.end();
  if (has0 && has1) return 1;
  return has1 ? 2 : 0;
}

/// Set-lifted boolean operation on the 0/1/2 encoding (0=false, 1=maybe, 2=true).
inline int lift(int a, int b, const std::function<int(int, int)>& f) {
  std::vector<int> out;
  for (int x : truth_set(a))
    for (int y : truth_set(b)) out.push_back(f(x, y));
  return truth_from_set(out);
}

/// First index (1-based) of the maximum over every combination of lower and
/// upper bounds; returns the smallest and largest index seen.
inline std::pair<int, int> index_of_max_corners(const std::vector<Box>& args) {
  const std::size_t n = args.size();
  int lo = static_cast<int>(n) + 1;
  int hi = 0;
  for (std::size_t mask = 0; mask < (1u << n); ++mask) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double vi = (mask >> i) & 1 ? args[i].hi : args[i].lo;
      double vb = (mask >> best) & 1 ? args[best].hi : args[best].lo;
      if (vi > vb) best = i;
    }
    lo = std::min(lo, static_cast<int>(best) + 1);
    hi = std::max(hi, static_cast<int>(best) + 1);
  }
  return {lo, hi};
}

/// Piecewise-linear interpolation with clamping, computed directly.
inline double interpolate(double x, const std::vector<double>& xs, const std::vector<double>& ys) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (x <= xs[i]) return ys[i - 1] + (ys[i] - ys[i - 1]) * (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys.back();
}

/// Random finite box with occasional zero endpoints and degenerate points.
inline Box random_box(std::mt19937_64& rng, double scale = 20.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::uniform_int_distribution<int> shape(0, 9);
  double a = u(rng);
  double b = u(rng);
  switch (shape(rng)) {
    case 0: return {a, a};
    case 1: return {0.0, std::abs(b)};
    case 2: return {-std::abs(a), 0.0};
    default: return {std::min(a, b), std::max(a, b)};
  }
}

/// Random sub-box of `b`.
inline Box random_sub_box(std::mt19937_64& rng, Box b) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = b.lo + (b.hi - b.lo) * u(rng);
  double y = b.lo + (b.hi - b.lo) * u(rng);
  if (u(rng) < 0.1) y = x;
  return {std::min(x, y), std::max(x, y)};
}

inline double random_point(std::mt19937_64& rng, Box b) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return b.lo + (b.hi - b.lo) * u(rng);
}

}  // namespace oracle
