#pragma once

#include <functional>
#include <optional>

#include "roadmap/expr/ast.hpp"
#include "roadmap/expr/typecheck.hpp"

namespace roadmap {

/// What the rewrite rules may know about the surrounding system.
struct RewriteContext {
  /// Type of a reference node; needed to keep reordering away from dates.
  TypeEnv types;
  /// Definite value of a reference node, if the solver has one. Used by
  /// propagation only.
  std::function<std::optional<Value>(const Expr& ref)> known;
  /// Called for every reference propagation replaces.
  std::function<void(const Expr& ref)> used;
};

// The seven rule families. Each returns a tree with the same value set over
// the reals for every assignment of its references (or a superset of it),
// and returns its input unchanged when nothing applies.

/// Constant subtrees become literals; definite conditions pick a branch;
/// `false & x` and `true | x` collapse.
ExprPtr fold_constants(const ExprPtr& e);
/// `x & true`, `x | false`, `x + 0`, `x - 0`, `x * 1`, `x / 1`, `x ^ 1`,
/// `--x`, `!!x` lose their neutral part.
ExprPtr remove_neutral(const ExprPtr& e);
/// Like terms combine (`y + y` to `2 * y`), duplicate conjuncts and
/// disjuncts drop, conditions already decided by a sibling conjunct
/// select their branch, equal branches collapse.
ExprPtr merge_terms(const ExprPtr& e, const RewriteContext& ctx);
/// Commutative chains of numbers sort into a canonical order with constants
/// last; constant addends and negated terms move across relations.
ExprPtr reorder(const ExprPtr& e, const RewriteContext& ctx);
/// Operators with a constant operand move into conditional branches; a
/// shared non-constant operand of both branches moves out.
ExprPtr raise_lower(const ExprPtr& e);
/// Comparisons decided by the known range of a builtin (`linear`, `num`,
/// `sin`, even powers, ...), negated relations, single-argument
/// `index_of_max`.
ExprPtr special_cases(const ExprPtr& e);
/// References with a definite value become literals.
ExprPtr propagate(const ExprPtr& e, const RewriteContext& ctx);

/// One pass of all families in their fixed order.
ExprPtr rewrite_once(const ExprPtr& e, const RewriteContext& ctx);

/// Replaces every `T` with the given month.
ExprPtr substitute_time(const ExprPtr& e, long long month);

}  // namespace roadmap
