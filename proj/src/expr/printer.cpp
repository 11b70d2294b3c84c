#include "roadmap/expr/printer.hpp"

#include <cmath>

#include "roadmap/values/date.hpp"

namespace roadmap {

namespace {

enum Prec : int { kCond = 0, kOr, kAnd, kRel, kAdd, kMul, kPow, kUnary, kPostfix, kPrimary };

int binary_prec(BinaryOp op) {
  if (op == BinaryOp::Or) return kOr;
  if (op == BinaryOp::And) return kAnd;
  if (is_relational(op)) return kRel;
  if (op == BinaryOp::Add || op == BinaryOp::Sub) return kAdd;
  if (op == BinaryOp::Mul || op == BinaryOp::Div) return kMul;
  return kPow;
}

std::string number_text(double v, const Unit& u) {
  std::string unit = u.symbol();
  if (std::isinf(v)) {
    std::string s = v > 0 ? "inf" : "-inf";
    return unit.empty() ? s : "(" + s + "*1" + (u.has_named_symbol() ? unit : "[" + unit + "]") + ")";
  }
  std::string s = format_exact(v);
  if (unit.empty()) return s;
  if (u.has_named_symbol()) return s + unit;
  if (v < 0) return "-" + format_exact(-v) + "[" + unit + "]";
  return s + "[" + unit + "]";
}

std::string date_text(double m) {
  if (std::isinf(m)) return m > 0 ? "inf" : "-inf";
  double whole = std::floor(m);
  std::string base = month_year(static_cast<long long>(whole));
  if (whole == m) return base;
  return "(" + base + " + months(" + format_exact(m - whole) + "))";
}

struct Printer {
  const PrintOptions& opts;

  std::string ref_text(const Reference& r) const {
    const std::string& block = opts.use_ids ? r.block : r.block_label;
    return block + "." + r.member();
  }

  std::string wrap(const ExprPtr& e, int min_prec) const {
    std::string s = print(e);
    return prec_of(e) < min_prec ? "(" + s + ")" : s;
  }

  int prec_of(const ExprPtr& e) const {
    switch (e->kind) {
      case ExprKind::Cond: return kCond;
      case ExprKind::Binary: return binary_prec(e->bop);
      case ExprKind::Unary: return kUnary;
      case ExprKind::UnitCast: return kPostfix;
      case ExprKind::Literal: {
        // Negative numbers and composite literals read back as operator trees.
        const Value& v = e->value;
        if (v.is_number() && v.range().is_point() && v.range().lo < 0) return kUnary;
        if (v.is_date() && v.range().is_point() && std::floor(v.range().lo) != v.range().lo) return kPrimary;
        return kPrimary;
      }
      default: return kPrimary;
    }
  }

  std::string print(const ExprPtr& e) const {
    switch (e->kind) {
      case ExprKind::Literal: return literal_source(e->value);
      case ExprKind::Interval: return "[" + print(e->args[0]) + ".." + print(e->args[1]) + "]";
      case ExprKind::Time: return "T";
      case ExprKind::Ident: {
        std::string s;
        for (const auto& seg : e->path) s += (s.empty() ? "" : ".") + seg;
        const ExprPtr& t = e->time_arg();
        if (!(t->kind == ExprKind::Time && t->implicit)) s += "(" + print(t) + ")";
        return s;
      }
      case ExprKind::Ref: {
        std::string s = ref_text(e->ref) + "(";
        if (e->ref.kind == RefKind::Kpi) s += (opts.use_ids ? e->ref.impl : e->ref.impl_label) + ",";
        return s + print(e->time_arg()) + ")";
      }
      case ExprKind::Unary: {
        std::string op = e->uop == UnaryOp::Neg ? "-" : "!";
        return op + wrap(e->args[0], kUnary);
      }
      case ExprKind::Binary: {
        int p = binary_prec(e->bop);
        bool right_assoc = e->bop == BinaryOp::Pow;
        std::string l = wrap(e->args[0], right_assoc ? p + 1 : p);
        std::string r = wrap(e->args[1], right_assoc ? p : p + 1);
        std::string op(to_string(e->bop));
        if (p == kPow) return l + "^" + r;
        return l + " " + op + " " + r;
      }
      case ExprKind::Cond: {
        std::string s = "if " + wrap(e->args[0], kOr) + " then " + wrap(e->args[1], kOr) + " else ";
        return s + print(e->args[2]);
      }
      case ExprKind::Aggregate: return e->name + "(" + print(e->args[0]) + ")";
      case ExprKind::Call: {
        std::string s = e->name + "(";
        for (std::size_t i = 0; i < e->args.size(); ++i) s += (i ? ", " : "") + print(e->args[i]);
        return s + ")";
      }
      case ExprKind::UnitCast: {
        std::string inner = print(e->args[0]);
        bool bare = e->args[0]->kind == ExprKind::Literal || prec_of(e->args[0]) < kPostfix;
        if (bare) inner = "(" + inner + ")";
        return inner + "[" + e->unit.symbol() + "]";
      }
    }
    return "?";
  }
};

}  // namespace

std::string literal_source(const Value& v) {
  if (v.is_bool()) {
    const auto& b = v.as_bool();
    return b.tainted ? "empty" : std::string(to_string(b.value));
  }
  Interval r = v.range();
  if (r.empty) return "empty";
  if (v.is_number()) {
    const Unit& u = v.as_number().unit;
    if (r.is_point()) return number_text(r.lo, u);
    return "[" + number_text(r.lo, u) + ".." + number_text(r.hi, u) + "]";
  }
  auto text = [&](double x) {
    if (v.is_date()) return date_text(x);
    if (std::isinf(x)) return std::string(x > 0 ? "inf" : "-inf");
    return "months(" + format_exact(x) + ")";
  };
  if (r.is_point()) return text(r.lo);
  return "[" + text(r.lo) + ".." + text(r.hi) + "]";
}

std::string to_source(const ExprPtr& e, const PrintOptions& opts) { return Printer{opts}.print(e); }

}  // namespace roadmap
