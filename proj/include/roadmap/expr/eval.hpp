#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "roadmap/expr/ast.hpp"

namespace roadmap {

class EvalError : public std::runtime_error {
public:
  EvalError(const std::string& msg, Span span) : std::runtime_error(msg), span_(span) {}
  Span span() const { return span_; }

private:
  Span span_;
};

/// A reference instantiated at one month.
struct RefKey {
  Reference ref;
  long long month = 0;
  bool operator==(const RefKey& o) const { return month == o.month && ref == o.ref; }
  bool operator<(const RefKey& o) const {
    return month != o.month ? month < o.month : ref < o.ref;
  }
};

struct RefKeyHash {
  std::size_t operator()(const RefKey& k) const {
    return ReferenceHash{}(k.ref) * 31u + std::hash<long long>{}(k.month);
  }
};

struct EvalContext {
  /// Month index bound to T.
  long long time = 0;
  /// Current value of a reference at a month.
  std::function<Value(const RefKey&)> lookup;
  /// Optional fallback for unresolved identifier nodes.
  std::function<Value(const Expr&, long long month)> lookup_ident;
  /// When set, receives every (reference, month) read.
  std::vector<RefKey>* reads = nullptr;
  /// Refine `?replacement` references inside if-branches on `R = k` tests.
  bool path_sensitive = true;
  /// Widest month range a time argument may span before the result is
  /// left unknown.
  long long max_time_span = 240;
};

/// Interval evaluation of an expression. Type errors surface as ValueError;
/// unresolved identifiers and leftover aggregations as EvalError.
Value evaluate(const ExprPtr& e, const EvalContext& ctx);

/// Value of an expression that mentions no references and no T.
std::optional<Value> constant_value(const ExprPtr& e);

/// True if the expression mentions T or any identifier/reference.
bool mentions_time_or_refs(const ExprPtr& e);

struct ReferenceUse {
  std::vector<std::string> path;  // for identifiers; empty for resolved refs
  const Expr* node = nullptr;
  Span span;
};

/// Every identifier or reference node in source order, T excluded.
std::vector<ReferenceUse> extract_references(const ExprPtr& e);

}  // namespace roadmap
