#include "roadmap/values/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace roadmap {

namespace {

[[noreturn]] void type_error(const std::string& msg) { throw ValueError(ValueError::Kind::Type, msg); }

[[noreturn]] void unit_error(const Unit& a, const Unit& b, std::string_view what) {
  auto sym = [](const Unit& u) { return u.is_dimensionless() ? std::string("1") : u.symbol(); };
  throw ValueError(ValueError::Kind::UnitMismatch,
                   "unit mismatch in " + std::string(what) + ": " + sym(a) + " vs " + sym(b));
}

[[noreturn]] void arity_error(std::string_view fn, const std::string& expected) {
  throw ValueError(ValueError::Kind::Arity, std::string(fn) + " expects " + expected);
}

std::string kind_name(const ExprType& t) {
  switch (t.kind) {
    case TypeKind::Boolean: return "boolean";
    case TypeKind::Number: return "number";
    case TypeKind::Date: return "date";
    case TypeKind::Duration: return "duration";
  }
  return "?";
}

[[noreturn]] void disallowed(BinaryOp op, const ExprType& a, const ExprType& b) {
  type_error(kind_name(a) + " " + std::string(to_string(op)) + " " + kind_name(b) + " disallowed");
}

bool is_num(const ExprType& t) { return t.kind == TypeKind::Number; }
bool is_dimless_num(const ExprType& t) { return is_num(t) && t.unit.is_dimensionless(); }

bool is_integer_point(const Value& v) {
  if (!v.is_number()) return false;
  const auto& r = v.as_number().range;
  return r.is_point() && std::isfinite(r.lo) && std::floor(r.lo) == r.lo && std::abs(r.lo) < 1e9;
}

}  // namespace

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Pow: return "^";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "&";
    case BinaryOp::Or: return "|";
  }
  return "?";
}

bool is_arithmetic(BinaryOp op) { return op <= BinaryOp::Pow; }
bool is_relational(BinaryOp op) { return op >= BinaryOp::Lt && op <= BinaryOp::Ne; }
bool is_logical(BinaryOp op) { return op == BinaryOp::And || op == BinaryOp::Or; }

BinaryOp flip_relation(BinaryOp op) {
  switch (op) {
    case BinaryOp::Lt: return BinaryOp::Gt;
    case BinaryOp::Le: return BinaryOp::Ge;
    case BinaryOp::Gt: return BinaryOp::Lt;
    case BinaryOp::Ge: return BinaryOp::Le;
    default: return op;
  }
}

BinaryOp negate_relation(BinaryOp op) {
  switch (op) {
    case BinaryOp::Lt: return BinaryOp::Ge;
    case BinaryOp::Le: return BinaryOp::Gt;
    case BinaryOp::Gt: return BinaryOp::Le;
    case BinaryOp::Ge: return BinaryOp::Lt;
    case BinaryOp::Eq: return BinaryOp::Ne;
    case BinaryOp::Ne: return BinaryOp::Eq;
    default: return op;
  }
}

ExprType binary_result_type(BinaryOp op, const ExprType& a, const ExprType& b, const Value* constant_rhs) {
  using K = TypeKind;
  if (is_logical(op)) {
    if (a.kind == K::Boolean && b.kind == K::Boolean) return ExprType::boolean();
    disallowed(op, a, b);
  }
  if (is_relational(op)) {
    if (a.kind != b.kind) disallowed(op, a, b);
    if (a.kind == K::Number && a.unit != b.unit) unit_error(a.unit, b.unit, "comparison");
    if (a.kind == K::Boolean && op != BinaryOp::Eq && op != BinaryOp::Ne) disallowed(op, a, b);
    return ExprType::boolean();
  }
  switch (op) {
    case BinaryOp::Add:
      if (is_num(a) && is_num(b)) {
        if (a.unit != b.unit) unit_error(a.unit, b.unit, "+");
        return a;
      }
      if (a.kind == K::Date && b.kind == K::Duration) return ExprType::date();
      if (a.kind == K::Duration && b.kind == K::Date) return ExprType::date();
      if (a.kind == K::Duration && b.kind == K::Duration) return ExprType::duration();
      disallowed(op, a, b);
    case BinaryOp::Sub:
      if (is_num(a) && is_num(b)) {
        if (a.unit != b.unit) unit_error(a.unit, b.unit, "-");
        return a;
      }
      if (a.kind == K::Date && b.kind == K::Duration) return ExprType::date();
      if (a.kind == K::Date && b.kind == K::Date) return ExprType::duration();
      if (a.kind == K::Duration && b.kind == K::Duration) return ExprType::duration();
      disallowed(op, a, b);
    case BinaryOp::Mul:
      if (is_num(a) && is_num(b)) return ExprType::number(a.unit * b.unit);
      if (a.kind == K::Duration && is_dimless_num(b)) return ExprType::duration();
      if (is_dimless_num(a) && b.kind == K::Duration) return ExprType::duration();
      disallowed(op, a, b);
    case BinaryOp::Div:
      if (is_num(a) && is_num(b)) return ExprType::number(a.unit / b.unit);
      if (a.kind == K::Duration && is_dimless_num(b)) return ExprType::duration();
      disallowed(op, a, b);
    case BinaryOp::Pow:
      if (!is_num(a) || !is_num(b)) disallowed(op, a, b);
      if (!b.unit.is_dimensionless()) type_error("exponent must be dimensionless");
      if (a.unit.is_dimensionless()) return a;
      if (constant_rhs && is_integer_point(*constant_rhs))
        return ExprType::number(a.unit.pow(static_cast<int>(constant_rhs->as_number().range.lo)));
      type_error("power of a quantity with unit " + a.unit.symbol() + " needs a constant integer exponent");
    default: break;
  }
  disallowed(op, a, b);
}

ExprType unary_result_type(UnaryOp op, const ExprType& a) {
  if (op == UnaryOp::Not) {
    if (a.kind != TypeKind::Boolean) type_error("! expects a boolean, got " + kind_name(a));
    return a;
  }
  if (a.kind == TypeKind::Number || a.kind == TypeKind::Duration) return a;
  type_error("unary - disallowed on " + kind_name(a));
}

Value arith(BinaryOp op, const Value& a, const Value& b) {
  if (op == BinaryOp::Pow && a.is_number() && b.is_number() && b.is_tainted())
    return NumInterval{Interval::tainted(), a.as_number().unit};
  ExprType rt = binary_result_type(op, a.type(), b.type(), &b);
  Interval x = a.range();
  Interval y = b.range();
  Interval r;
  switch (op) {
    case BinaryOp::Add: r = x + y; break;
    case BinaryOp::Sub: r = x - y; break;
    case BinaryOp::Mul: r = x * y; break;
    case BinaryOp::Div: r = x / y; break;
    case BinaryOp::Pow:
      if (is_integer_point(b)) {
        r = pow_int(x, static_cast<long long>(y.lo));
      } else {
        r = pow_real(x, y);
      }
      break;
    default: type_error("not an arithmetic operator: " + std::string(to_string(op)));
  }
  return Value::top(rt).with_range(r);
}

Ternary compare_ranges(BinaryOp op, const Interval& a, const Interval& b) {
  switch (op) {
    case BinaryOp::Lt:
      if (a.hi < b.lo) return Ternary::True;
      if (a.lo >= b.hi) return Ternary::False;
      return Ternary::Maybe;
    case BinaryOp::Le:
      if (a.hi <= b.lo) return Ternary::True;
      if (a.lo > b.hi) return Ternary::False;
      return Ternary::Maybe;
    case BinaryOp::Gt: return compare_ranges(BinaryOp::Lt, b, a);
    case BinaryOp::Ge: return compare_ranges(BinaryOp::Le, b, a);
    case BinaryOp::Eq:
      if (a.is_point() && b.is_point() && a.lo == b.lo) return Ternary::True;
      if (a.hi < b.lo || b.hi < a.lo) return Ternary::False;
      return Ternary::Maybe;
    case BinaryOp::Ne: return !compare_ranges(BinaryOp::Eq, a, b);
    default: return Ternary::Maybe;
  }
}

Value compare(BinaryOp op, const Value& a, const Value& b) {
  binary_result_type(op, a.type(), b.type());
  if (a.is_tainted() || b.is_tainted()) return BoolValue{Ternary::Maybe, true};
  return Value::boolean(compare_ranges(op, a.range(), b.range()));
}

Value kleene(BinaryOp op, const Value& a, const Value& b) {
  binary_result_type(op, a.type(), b.type());
  if (a.is_tainted() || b.is_tainted()) return BoolValue{Ternary::Maybe, true};
  Ternary x = a.as_bool().value;
  Ternary y = b.as_bool().value;
  return Value::boolean(op == BinaryOp::And ? (x & y) : (x | y));
}

Value apply_binary(BinaryOp op, const Value& a, const Value& b) {
  if (is_arithmetic(op)) return arith(op, a, b);
  if (is_relational(op)) return compare(op, a, b);
  return kleene(op, a, b);
}

Value apply_unary(UnaryOp op, const Value& a) {
  unary_result_type(op, a.type());
  if (op == UnaryOp::Not) {
    const auto& b = a.as_bool();
    return BoolValue{!b.value, b.tainted};
  }
  return a.with_range(-a.range());
}

namespace {
void require_same_type(const Value& a, const Value& b, std::string_view what) {
  if (a.kind() != b.kind()) type_error(std::string(what) + " of " + kind_name(a.type()) + " and " + kind_name(b.type()));
  if (a.is_number() && a.as_number().unit != b.as_number().unit)
    unit_error(a.as_number().unit, b.as_number().unit, what);
}
}  // namespace

Value intersect(const Value& a, const Value& b) {
  require_same_type(a, b, "intersection");
  return a.with_range(intersect(a.range(), b.range()));
}

Value hull(const Value& a, const Value& b) {
  require_same_type(a, b, "hull");
  return a.with_range(hull(a.range(), b.range()));
}

// ---------------------------------------------------------------------------
// Builtin functions

namespace {

const std::string_view kBuiltins[] = {"sin", "cos",  "exp", "ln", "log", "sqrt", "min", "max", "num",
                                      "linear", "index_of_max", "months", "years", "union"};

void require_arity(std::string_view fn, std::size_t n, std::size_t expected) {
  if (n != expected) arity_error(fn, std::to_string(expected) + " argument(s), got " + std::to_string(n));
}

ExprType same_type_list(std::string_view fn, std::span<const ExprType> args, bool allow_bool) {
  if (args.empty()) arity_error(fn, "at least one argument");
  const ExprType& first = args[0];
  if (first.kind == TypeKind::Boolean && !allow_bool) type_error(std::string(fn) + " of boolean disallowed");
  for (const auto& t : args) {
    if (t.kind != first.kind) type_error(std::string(fn) + " mixes " + kind_name(first) + " and " + kind_name(t));
    if (t.kind == TypeKind::Number && t.unit != first.unit) unit_error(first.unit, t.unit, fn);
  }
  return first;
}

bool is_ordered_kind(const ExprType& t) { return t.kind != TypeKind::Boolean; }

Value linear(std::span<const Value> args) {
  const Value& x = args[0];
  const std::size_t knots = (args.size() - 1) / 2;
  std::vector<Interval> xs(knots);
  std::vector<Value> ys;
  ys.reserve(knots);
  bool point_knots = true;
  for (std::size_t i = 0; i < knots; ++i) {
    xs[i] = args[1 + 2 * i].range();
    ys.push_back(args[2 + 2 * i]);
    point_knots = point_knots && xs[i].is_point();
  }
  Value tainted_result = ys[0].with_range(Interval::tainted());
  if (x.is_tainted()) return tainted_result;
  for (const auto& y : ys)
    if (y.is_tainted()) return tainted_result;
  for (const auto& k : xs)
    if (k.empty) return tainted_result;

  auto hull_all = [&] {
    Interval h = ys[0].range();
    for (const auto& y : ys) h = hull(h, y.range());
    return ys[0].with_range(h);
  };
  if (!point_knots) return hull_all();
  for (std::size_t i = 1; i < knots; ++i)
    if (!(xs[i].lo > xs[i - 1].lo))
      throw ValueError(ValueError::Kind::Argument, "linear: knot positions must be strictly increasing");

  // Clamped piecewise-linear interpolation at a single position.
  auto at = [&](double p) -> Interval {
    if (p <= xs.front().lo) return ys.front().range();
    if (p >= xs.back().lo) return ys.back().range();
    std::size_t i = 1;
    while (xs[i].lo < p) ++i;
    if (xs[i].lo == p) return ys[i].range();
    double x0 = xs[i - 1].lo;
    double x1 = xs[i].lo;
    double w = (p - x0) / (x1 - x0);
    // Rounding in the weights scales with the knot values, not with the
    // (possibly cancelled) result; pad by a few ulps of the operands.
    Interval y0 = ys[i - 1].range();
    Interval y1 = ys[i].range();
    Interval r = y0 * Interval::point(1.0 - w) + y1 * Interval::point(w);
    double mag = std::max({std::abs(y0.lo), std::abs(y0.hi), std::abs(y1.lo), std::abs(y1.hi)});
    double pad = 8.0 * std::numeric_limits<double>::epsilon() * mag;
    return Interval{r.lo - pad, r.hi + pad, false};
  };

  Interval xr = x.range();
  if (xr.is_point()) return ys[0].with_range(at(xr.lo));
  Interval r = hull(at(xr.lo), at(xr.hi));
  for (std::size_t i = 0; i < knots; ++i)
    if (xs[i].lo > xr.lo && xs[i].lo < xr.hi) r = hull(r, ys[i].range());
  return ys[0].with_range(r);
}

}  // namespace

bool is_builtin_function(std::string_view name) {
  return std::find(std::begin(kBuiltins), std::end(kBuiltins), name) != std::end(kBuiltins);
}

ExprType function_result_type(std::string_view name, std::span<const ExprType> args) {
  const std::size_t n = args.size();
  if (name == "sin" || name == "cos" || name == "exp" || name == "ln" || name == "log") {
    require_arity(name, n, 1);
    if (!is_dimless_num(args[0])) type_error(std::string(name) + " expects a dimensionless number");
    return args[0];
  }
  if (name == "sqrt") {
    require_arity(name, n, 1);
    if (!is_num(args[0])) type_error("sqrt expects a number");
    auto root = args[0].unit.root(2);
    if (!root) throw ValueError(ValueError::Kind::UnitMismatch, "sqrt of unit " + args[0].unit.symbol());
    return ExprType::number(*root);
  }
  if (name == "min" || name == "max") {
    ExprType t = same_type_list(name, args, false);
    if (!is_ordered_kind(t)) type_error(std::string(name) + " expects ordered values");
    return t;
  }
  if (name == "union") return same_type_list(name, args, true);
  if (name == "num") {
    require_arity(name, n, 1);
    if (args[0].kind != TypeKind::Boolean) type_error("num expects a boolean");
    return ExprType::number();
  }
  if (name == "months" || name == "years") {
    require_arity(name, n, 1);
    if (!is_dimless_num(args[0])) type_error(std::string(name) + " expects a dimensionless number");
    return ExprType::duration();
  }
  if (name == "index_of_max") {
    ExprType t = same_type_list(name, args, false);
    if (!is_num(t)) type_error("index_of_max expects numbers");
    return ExprType::number();
  }
  if (name == "linear") {
    if (n < 3 || n % 2 == 0) arity_error(name, "x followed by one or more (x, y) pairs");
    const ExprType& x = args[0];
    if (x.kind == TypeKind::Boolean) type_error("linear position must not be boolean");
    const ExprType& y = args[2];
    if (y.kind == TypeKind::Boolean) type_error("linear values must not be boolean");
    for (std::size_t i = 1; i < n; i += 2) {
      if (!(args[i] == x)) type_error("linear knot position type differs from x");
      if (!(args[i + 1] == y)) type_error("linear knot values must share one type");
    }
    return y;
  }
  type_error("unknown function " + std::string(name));
}

Value index_of_max(std::span<const Value> args) {
  std::vector<ExprType> types;
  for (const auto& a : args) types.push_back(a.type());
  function_result_type("index_of_max", types);
  for (const auto& a : args)
    if (a.is_tainted()) return NumInterval{Interval::tainted(), {}};
  // Index i can be the first maximum iff, pushing it to its upper bound and
  // everything else to its lower bound, it beats all earlier operands
  // strictly and ties-or-beats all later ones.
  double first = 0.0;
  double last = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    double hi = args[i].range().hi;
    bool possible = true;
    for (std::size_t j = 0; j < args.size() && possible; ++j) {
      if (j == i) continue;
      double lo = args[j].range().lo;
      possible = j < i ? hi > lo : hi >= lo;
    }
    if (!possible) continue;
    double idx = static_cast<double>(i + 1);
    if (!any) first = idx;
    last = idx;
    any = true;
  }
  if (!any) return NumInterval{Interval::tainted(), {}};
  return NumInterval{{first, last, false}, {}};
}

Value apply_function(std::string_view name, std::span<const Value> args) {
  std::vector<ExprType> types;
  types.reserve(args.size());
  for (const auto& a : args) types.push_back(a.type());
  ExprType rt = function_result_type(name, types);

  if (name == "index_of_max") return index_of_max(args);
  if (name == "linear") return linear(args);

  bool tainted = std::any_of(args.begin(), args.end(), [](const Value& v) { return v.is_tainted(); });
  if (tainted) return Value::tainted(rt);

  if (name == "min" || name == "max" || name == "union") {
    Interval r = args[0].range();
    for (std::size_t i = 1; i < args.size(); ++i) {
      Interval o = args[i].range();
      r = name == "min" ? ival_min(r, o) : name == "max" ? ival_max(r, o) : hull(r, o);
    }
    return args[0].with_range(r);
  }
  if (name == "num") return Value::top(rt).with_range(args[0].range());
  Interval x = args[0].range();
  Interval r;
  if (name == "sin") r = ival_sin(x);
  else if (name == "cos") r = ival_cos(x);
  else if (name == "exp") r = ival_exp(x);
  else if (name == "ln") r = ival_ln(x);
  else if (name == "log") r = ival_log10(x);
  else if (name == "sqrt") r = ival_sqrt(x);
  else if (name == "months") r = x;
  else if (name == "years") r = x * Interval::point(12.0);
  return Value::top(rt).with_range(r);
}

}  // namespace roadmap
