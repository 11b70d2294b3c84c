#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "roadmap/values/ops.hpp"
#include "roadmap/values/value.hpp"

namespace roadmap {

/// Half-open byte range [begin, end) into the original source text.
struct Span {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  bool operator==(const Span&) const = default;
};

enum class RefKind { Property, Requirement, Kpi, Availability, Replacement };

/// A resolved reference to one quantity of the flat constraint system.
/// Identity is carried by the stable block ids; the labels are the
/// shorter names used when rendering.
struct Reference {
  RefKind kind = RefKind::Property;
  std::string block;        // stable id, e.g. "Vehicle.Fuse"
  std::string name;         // property name (Property only)
  int index = 0;            // N of ?requirementN / ?kpiN
  std::string impl;         // alternative id (Kpi only)
  std::string block_label;  // display name, e.g. "Fuse"
  std::string impl_label;

  static Reference property(std::string block, std::string name);
  static Reference requirement(std::string block, int n);
  static Reference kpi(std::string block, int n, std::string impl);
  static Reference availability(std::string block);
  static Reference replacement(std::string block);

  /// Name part after the block: "Current", "?requirement2", "?kpi1".
  std::string member() const;
  /// `Fuse.MaxLoadCurrent`, `Fuse.?kpi1(BlFuse)` (labels, no time argument).
  std::string label() const;
  /// Same shape as label() but with stable ids.
  std::string id() const;

  bool operator==(const Reference& o) const;
  bool operator<(const Reference& o) const;
};

struct ReferenceHash {
  std::size_t operator()(const Reference& r) const;
};

enum class ExprKind {
  Literal,    // value
  Interval,   // args = {lo, hi}
  Ident,      // path, args = {time}
  Ref,        // ref, args = {time}
  Time,       // the symbol T
  Unary,      // uop, args = {operand}
  Binary,     // bop, args = {lhs, rhs}
  Cond,       // args = {cond, then, else}
  Aggregate,  // name (SUM, ...), args = {body}
  Call,       // name, args
  UnitCast,   // unit, args = {operand}
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree node. Only the fields relevant for `kind`
/// are meaningful.
struct Expr {
  ExprKind kind = ExprKind::Literal;
  Span span;
  Value value;
  std::vector<std::string> path;
  Reference ref;
  BinaryOp bop = BinaryOp::Add;
  UnaryOp uop = UnaryOp::Neg;
  std::string name;
  Unit unit;
  /// Ident/Time nodes whose time argument was not written in the source.
  bool implicit = false;
  std::vector<ExprPtr> args;

  const ExprPtr& time_arg() const { return args.front(); }
};

namespace ast {
ExprPtr literal(Value v, Span s = {});
ExprPtr interval(ExprPtr lo, ExprPtr hi, Span s = {});
ExprPtr ident(std::vector<std::string> path, ExprPtr time, Span s = {});
ExprPtr ref(Reference r, ExprPtr time, Span s = {});
ExprPtr time(Span s = {}, bool implicit = false);
ExprPtr unary(UnaryOp op, ExprPtr a, Span s = {});
ExprPtr binary(BinaryOp op, ExprPtr a, ExprPtr b, Span s = {});
ExprPtr cond(ExprPtr c, ExprPtr t, ExprPtr e, Span s = {});
ExprPtr aggregate(std::string name, ExprPtr body, Span s = {});
ExprPtr call(std::string name, std::vector<ExprPtr> args, Span s = {});
ExprPtr unit_cast(Unit u, ExprPtr a, Span s = {});

/// Left-nested chain a op b op c ...; `empty` when the list is empty.
ExprPtr chain(BinaryOp op, const std::vector<ExprPtr>& items, ExprPtr empty);
/// Copy of `e` with args replaced.
ExprPtr with_args(const Expr& e, std::vector<ExprPtr> args);
}  // namespace ast

/// Tree equality ignoring spans and the implicit-time flag.
bool structurally_equal(const ExprPtr& a, const ExprPtr& b);
/// Node count.
std::size_t expr_size(const ExprPtr& e);
/// Literal, or an interval literal over literals.
bool is_constant(const ExprPtr& e);

/// Aggregation names and their expansion operators.
bool is_aggregation(std::string_view name);

}  // namespace roadmap
