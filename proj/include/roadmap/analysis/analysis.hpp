#pragma once

#include <optional>
#include <string>
#include <vector>

#include "roadmap/lowering/lowering.hpp"
#include "roadmap/solver/solver.hpp"

namespace roadmap {

enum class AvailabilityCase { Always, Currently, NotYet, NoLonger, Maybe, Never };

std::string to_string(AvailabilityCase c);

struct SweepOptions {
  long long from = 0;
  long long to = 0;
  int step = 1;
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;
  SolveOptions solve;
};

/// Default horizon, Jan2021 to Jan2040.
SweepOptions default_sweep_options();

/// Independent solves at from, from+step, ... up to `to`.
struct Sweep {
  std::vector<long long> months;
  std::vector<SolveResult> samples;

  /// Value of constraint `ci` at every sample.
  std::vector<Value> series(std::size_t ci) const;
  /// Sample index of a month, if it was sampled.
  std::optional<std::size_t> sample_at(long long month) const;
};

/// Throws std::invalid_argument when from > to or step < 1. Samples are
/// solved in parallel; the result does not depend on the thread count.
Sweep sweep(const ConstraintSystem& cs, const SweepOptions& opts);

/// Case of a boolean element at sample `k` of its series. `unconditional`
/// marks elements whose defining constraint is the literal `true`.
/// Throws std::out_of_range for k outside the series.
AvailabilityCase classify(const std::vector<Value>& series, std::size_t k, bool unconditional);

/// Requirements and availabilities: the references that get a case.
bool has_case(const Reference& r);
/// True if the constraint's generated right-hand side is the literal `true`.
bool unconditional(const Constraint& c);

/// Whether constraint `ci` renders differently at sample k than at k-1.
/// Throws std::out_of_range for k == 0 or k beyond the sweep.
bool changed_since_previous(const Sweep& s, std::size_t ci, std::size_t k);

struct TraceElement {
  std::string id;
  /// Some constraint of this element changed since the previous sample;
  /// absent at the first sample.
  std::optional<bool> changed;
};

/// Model elements behind the bound of `ci` at sample k, with change flags.
std::vector<TraceElement> trace_report(const ConstraintSystem& cs, const Sweep& s, std::size_t ci, std::size_t k);

/// One row per (sample, reference): monthISO, reference, lower, upper,
/// unit, ternary, case.
std::string sweep_csv(const ConstraintSystem& cs, const Sweep& s);

}  // namespace roadmap
