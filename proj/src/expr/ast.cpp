#include "roadmap/expr/ast.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

namespace roadmap {

Reference Reference::property(std::string block, std::string name) {
  Reference r;
  r.kind = RefKind::Property;
  r.block_label = block;
  r.block = std::move(block);
  r.name = std::move(name);
  return r;
}

Reference Reference::requirement(std::string block, int n) {
  Reference r;
  r.kind = RefKind::Requirement;
  r.block_label = block;
  r.block = std::move(block);
  r.index = n;
  return r;
}

Reference Reference::kpi(std::string block, int n, std::string impl) {
  Reference r;
  r.kind = RefKind::Kpi;
  r.block_label = block;
  r.block = std::move(block);
  r.index = n;
  r.impl_label = impl;
  r.impl = std::move(impl);
  return r;
}

Reference Reference::availability(std::string block) {
  Reference r;
  r.kind = RefKind::Availability;
  r.block_label = block;
  r.block = std::move(block);
  return r;
}

Reference Reference::replacement(std::string block) {
  Reference r;
  r.kind = RefKind::Replacement;
  r.block_label = block;
  r.block = std::move(block);
  return r;
}

std::string Reference::member() const {
  switch (kind) {
    case RefKind::Property: return name;
    case RefKind::Requirement: return "?requirement" + std::to_string(index);
    case RefKind::Kpi: return "?kpi" + std::to_string(index);
    case RefKind::Availability: return "?availability";
    case RefKind::Replacement: return "?replacement";
  }
  return {};
}

std::string Reference::label() const {
  std::string s = block_label + "." + member();
  if (kind == RefKind::Kpi) s += "(" + impl_label + ")";
  return s;
}

std::string Reference::id() const {
  std::string s = block + "." + member();
  if (kind == RefKind::Kpi) s += "(" + impl + ")";
  return s;
}

bool Reference::operator==(const Reference& o) const {
  return kind == o.kind && block == o.block && name == o.name && index == o.index && impl == o.impl;
}

bool Reference::operator<(const Reference& o) const {
  return std::tie(block, kind, name, index, impl) < std::tie(o.block, o.kind, o.name, o.index, o.impl);
}

std::size_t ReferenceHash::operator()(const Reference& r) const {
  std::size_t h = std::hash<std::string>{}(r.block);
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  mix(static_cast<std::size_t>(r.kind));
  mix(std::hash<std::string>{}(r.name));
  mix(static_cast<std::size_t>(r.index));
  mix(std::hash<std::string>{}(r.impl));
  return h;
}

namespace ast {

namespace {
std::shared_ptr<Expr> node(ExprKind k, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->span = s;
  return e;
}
}  // namespace

ExprPtr literal(Value v, Span s) {
  auto e = node(ExprKind::Literal, s);
  e->value = std::move(v);
  return e;
}

ExprPtr interval(ExprPtr lo, ExprPtr hi, Span s) {
  auto e = node(ExprKind::Interval, s);
  e->args = {std::move(lo), std::move(hi)};
  return e;
}

ExprPtr ident(std::vector<std::string> path, ExprPtr time, Span s) {
  auto e = node(ExprKind::Ident, s);
  e->path = std::move(path);
  e->args = {std::move(time)};
  return e;
}

ExprPtr ref(Reference r, ExprPtr time, Span s) {
  auto e = node(ExprKind::Ref, s);
  e->ref = std::move(r);
  e->args = {std::move(time)};
  return e;
}

ExprPtr time(Span s, bool implicit) {
  auto e = node(ExprKind::Time, s);
  e->implicit = implicit;
  return e;
}

ExprPtr unary(UnaryOp op, ExprPtr a, Span s) {
  auto e = node(ExprKind::Unary, s);
  e->uop = op;
  e->args = {std::move(a)};
  return e;
}

ExprPtr binary(BinaryOp op, ExprPtr a, ExprPtr b, Span s) {
  auto e = node(ExprKind::Binary, s);
  e->bop = op;
  e->args = {std::move(a), std::move(b)};
  return e;
}

ExprPtr cond(ExprPtr c, ExprPtr t, ExprPtr f, Span s) {
  auto e = node(ExprKind::Cond, s);
  e->args = {std::move(c), std::move(t), std::move(f)};
  return e;
}

ExprPtr aggregate(std::string name, ExprPtr body, Span s) {
  auto e = node(ExprKind::Aggregate, s);
  e->name = std::move(name);
  e->args = {std::move(body)};
  return e;
}

ExprPtr call(std::string name, std::vector<ExprPtr> args, Span s) {
  auto e = node(ExprKind::Call, s);
  e->name = std::move(name);
  e->args = std::move(args);
  return e;
}

ExprPtr unit_cast(Unit u, ExprPtr a, Span s) {
  auto e = node(ExprKind::UnitCast, s);
  e->unit = u;
  e->args = {std::move(a)};
  return e;
}

ExprPtr chain(BinaryOp op, const std::vector<ExprPtr>& items, ExprPtr empty) {
  if (items.empty()) return empty;
  ExprPtr acc = items.front();
  for (std::size_t i = 1; i < items.size(); ++i) acc = binary(op, acc, items[i]);
  return acc;
}

ExprPtr with_args(const Expr& e, std::vector<ExprPtr> args) {
  auto copy = std::make_shared<Expr>(e);
  copy->args = std::move(args);
  return copy;
}

}  // namespace ast

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->args.size() != b->args.size()) return false;
  switch (a->kind) {
    case ExprKind::Literal:
      if (!(a->value == b->value)) return false;
      break;
    case ExprKind::Ident:
      if (a->path != b->path) return false;
      break;
    case ExprKind::Ref:
      if (!(a->ref == b->ref)) return false;
      break;
    case ExprKind::Unary:
      if (a->uop != b->uop) return false;
      break;
    case ExprKind::Binary:
      if (a->bop != b->bop) return false;
      break;
    case ExprKind::Aggregate:
    case ExprKind::Call:
      if (a->name != b->name) return false;
      break;
    case ExprKind::UnitCast:
      if (a->unit != b->unit) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!structurally_equal(a->args[i], b->args[i])) return false;
  return true;
}

std::size_t expr_size(const ExprPtr& e) {
  std::size_t n = 1;
  for (const auto& a : e->args) n += expr_size(a);
  return n;
}

bool is_constant(const ExprPtr& e) {
  if (e->kind == ExprKind::Literal) return true;
  if (e->kind == ExprKind::Interval) return is_constant(e->args[0]) && is_constant(e->args[1]);
  return false;
}

bool is_aggregation(std::string_view name) {
  static constexpr std::string_view kNames[] = {"SUM", "PRODUCT", "AND", "OR", "MIN", "MAX", "UNION"};
  return std::find(std::begin(kNames), std::end(kNames), name) != std::end(kNames);
}

}  // namespace roadmap
