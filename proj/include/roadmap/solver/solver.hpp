#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "roadmap/lowering/lowering.hpp"

namespace roadmap {

/// Set of constraint indices, stored as a bitset.
class TraceSet {
public:
  TraceSet() = default;
  explicit TraceSet(std::size_t universe) : bits_((universe + 63) / 64, 0) {}

  void insert(std::size_t i);
  bool contains(std::size_t i) const;
  /// Adds every element of `o`; returns true if this set grew.
  bool merge(const TraceSet& o);
  std::vector<std::size_t> indices() const;
  std::size_t size() const;
  bool operator==(const TraceSet&) const = default;

private:
  std::vector<std::uint64_t> bits_;
};

/// Narrows `x` under the assertion `x op y`; disjoint results are tainted.
Value narrow_relation(const Value& x, BinaryOp op, const Value& y);

struct RoundReport {
  int round = 0;
  /// Changed constraints and bounds in listing form, in slot order.
  std::vector<std::string> changes;
  /// Bounds of the constraint system's references at the solve month,
  /// indexed like the constraints.
  const std::vector<Value>* bounds = nullptr;
};

struct SolveOptions {
  int max_rounds = 50;
  /// Rewrites producing a larger tree are dropped for that constraint.
  std::size_t max_expr_size = 512;
  /// Cap on instances of constraints at months other than the solve month.
  std::size_t max_instances = 4096;
  bool rewrite = true;
  std::function<void(const RoundReport&)> on_round;
};

struct SolveResult {
  long long time = 0;
  bool converged = false;
  int rounds = 0;
  /// Final bound of each constraint's reference at `time`.
  std::vector<Value> values;
  /// Constraints that contributed to each bound.
  std::vector<TraceSet> traces;
  /// Final right-hand side of each constraint at `time`.
  std::vector<ExprPtr> rhs;
};

/// Fix-point iteration over the system with T bound to `month`. The result
/// is a superset of every solution; it never throws on contradictions,
/// which show up as tainted bounds.
SolveResult solve(const ConstraintSystem& cs, long long month, const SolveOptions& opts = {});

/// Index of the constraint defining `ref`, if any.
std::optional<std::size_t> constraint_index(const ConstraintSystem& cs, const Reference& ref);

/// Sorted, de-duplicated model element ids behind a trace.
std::vector<std::string> trace_elements(const ConstraintSystem& cs, const TraceSet& t);

}  // namespace roadmap
