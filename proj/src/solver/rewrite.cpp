#include "roadmap/solver/rewrite.hpp"

#include <algorithm>
#include <cmath>

#include "roadmap/expr/eval.hpp"
#include "roadmap/expr/printer.hpp"

namespace roadmap {

namespace {

bool is_lit(const ExprPtr& e) { return e->kind == ExprKind::Literal; }

bool is_number_lit(const ExprPtr& e, double v) {
  if (!is_lit(e) || !e->value.is_number()) return false;
  const NumInterval& n = e->value.as_number();
  return n.unit.is_dimensionless() && n.range.is_point() && n.range.lo == v;
}

bool is_bool_lit(const ExprPtr& e, Ternary t) {
  return is_lit(e) && e->value.is_bool() && !e->value.as_bool().tainted && e->value.as_bool().value == t;
}

// Dimensionless finite point literal, used as a coefficient.
std::optional<double> coefficient(const ExprPtr& e) {
  if (!is_lit(e) || !e->value.is_number()) return std::nullopt;
  const NumInterval& n = e->value.as_number();
  if (!n.unit.is_dimensionless() || !n.range.is_point() || !std::isfinite(n.range.lo)) return std::nullopt;
  return n.range.lo;
}

ExprPtr num(double v) { return ast::literal(Value::number(v)); }

// Applies `f` to every child and rebuilds the node only if a child changed.
template <class F>
ExprPtr map_children(const ExprPtr& e, F&& f) {
  if (e->args.empty()) return e;
  std::vector<ExprPtr> args;
  args.reserve(e->args.size());
  bool changed = false;
  for (const auto& a : e->args) {
    args.push_back(f(a));
    changed |= args.back() != a;
  }
  return changed ? ast::with_args(*e, std::move(args)) : e;
}

ExprPtr bin(BinaryOp op, ExprPtr a, ExprPtr b) { return ast::binary(op, std::move(a), std::move(b)); }

std::string sort_key(const ExprPtr& e) { return to_source(e, PrintOptions{true}); }

TypeAnnotations annotate(const ExprPtr& e, const RewriteContext& ctx) {
  TypeAnnotations ann;
  if (!ctx.types) return ann;
  try {
    typecheck(e, ctx.types, &ann);
  } catch (...) {
    ann.clear();
  }
  return ann;
}

bool numeric(const TypeAnnotations& ann, const Expr* e) {
  auto it = ann.find(e);
  return it != ann.end() && it->second.kind == TypeKind::Number;
}

// ---- sums ---------------------------------------------------------------

struct Term {
  double coef;
  ExprPtr expr;
};

void flatten_sum(const ExprPtr& e, double sign, std::vector<Term>& out) {
  if (e->kind == ExprKind::Binary && (e->bop == BinaryOp::Add || e->bop == BinaryOp::Sub)) {
    flatten_sum(e->args[0], sign, out);
    flatten_sum(e->args[1], e->bop == BinaryOp::Add ? sign : -sign, out);
  } else if (e->kind == ExprKind::Unary && e->uop == UnaryOp::Neg) {
    flatten_sum(e->args[0], -sign, out);
  } else {
    out.push_back({sign, e});
  }
}

ExprPtr scaled(double k, const ExprPtr& x) {
  if (k == 1) return x;
  return bin(BinaryOp::Mul, num(k), x);
}

ExprPtr build_sum(const std::vector<Term>& terms) {
  ExprPtr acc;
  for (const Term& t : terms) {
    if (!acc) {
      acc = t.coef < 0 ? ast::unary(UnaryOp::Neg, scaled(-t.coef, t.expr)) : scaled(t.coef, t.expr);
    } else if (t.coef < 0) {
      acc = bin(BinaryOp::Sub, acc, scaled(-t.coef, t.expr));
    } else {
      acc = bin(BinaryOp::Add, acc, scaled(t.coef, t.expr));
    }
  }
  return acc;
}

void flatten_same(const ExprPtr& e, BinaryOp op, std::vector<ExprPtr>& out) {
  if (e->kind == ExprKind::Binary && e->bop == op) {
    flatten_same(e->args[0], op, out);
    flatten_same(e->args[1], op, out);
  } else {
    out.push_back(e);
  }
}

ExprPtr build_chain(BinaryOp op, const std::vector<ExprPtr>& items) {
  ExprPtr acc = items.front();
  for (std::size_t i = 1; i < items.size(); ++i) acc = bin(op, acc, items[i]);
  return acc;
}

bool sum_chain(const ExprPtr& e) {
  return (e->kind == ExprKind::Binary && (e->bop == BinaryOp::Add || e->bop == BinaryOp::Sub)) ||
         (e->kind == ExprKind::Unary && e->uop == UnaryOp::Neg);
}

// ---- static ranges for special cases ------------------------------------

std::optional<Interval> static_range(const ExprPtr& e) {
  if (is_lit(e)) {
    if (!e->value.is_number() || e->value.is_tainted()) return std::nullopt;
    return e->value.range();
  }
  if (e->kind == ExprKind::Call) {
    const std::string& n = e->name;
    if (n == "num") return Interval{0, 1, false};
    if (n == "sin" || n == "cos") return Interval{-1, 1, false};
    if (n == "index_of_max") return Interval{1, static_cast<double>(e->args.size()), false};
    if (n == "linear" && e->args.size() == 5) {
      auto y1 = static_range(e->args[2]);
      auto y2 = static_range(e->args[4]);
      const auto finite = [](const Interval& r) { return std::isfinite(r.lo) && std::isfinite(r.hi); };
      if (y1 && y2 && finite(*y1) && finite(*y2)) return Interval{std::min(y1->lo, y2->lo), std::max(y1->hi, y2->hi), false};
    }
    if ((n == "min" || n == "max") && !e->args.empty()) {
      std::vector<Interval> rs;
      for (const auto& a : e->args) {
        auto r = static_range(a);
        if (!r) return std::nullopt;
        rs.push_back(*r);
      }
      Interval out = rs.front();
      for (const Interval& r : rs) {
        if (n == "min") out = {std::min(out.lo, r.lo), std::min(out.hi, r.hi), false};
        else out = {std::max(out.lo, r.lo), std::max(out.hi, r.hi), false};
      }
      return out;
    }
  }
  if (e->kind == ExprKind::Binary && e->bop == BinaryOp::Pow) {
    auto k = coefficient(e->args[1]);
    if (k && *k > 0 && std::fmod(*k, 2.0) == 0.0) return Interval{0, kInf, false};
  }
  return std::nullopt;
}

}  // namespace

ExprPtr substitute_time(const ExprPtr& e, long long month) {
  if (e->kind == ExprKind::Time) return ast::literal(Value::date(static_cast<double>(month)), e->span);
  return map_children(e, [&](const ExprPtr& a) { return substitute_time(a, month); });
}

ExprPtr fold_constants(const ExprPtr& e) {
  ExprPtr n = map_children(e, fold_constants);
  switch (n->kind) {
    case ExprKind::Literal:
    case ExprKind::Time:
    case ExprKind::Ident:
    case ExprKind::Ref:
    case ExprKind::Aggregate:
      return n;
    case ExprKind::Cond: {
      const ExprPtr& c = n->args[0];
      if (is_bool_lit(c, Ternary::True)) return n->args[1];
      if (is_bool_lit(c, Ternary::False)) return n->args[2];
      break;
    }
    case ExprKind::Binary:
      if (n->bop == BinaryOp::And && (is_bool_lit(n->args[0], Ternary::False) || is_bool_lit(n->args[1], Ternary::False)))
        return ast::literal(Value::boolean(false), n->span);
      if (n->bop == BinaryOp::Or && (is_bool_lit(n->args[0], Ternary::True) || is_bool_lit(n->args[1], Ternary::True)))
        return ast::literal(Value::boolean(true), n->span);
      break;
    default:
      break;
  }
  if (!std::all_of(n->args.begin(), n->args.end(), is_lit)) return n;
  try {
    return ast::literal(evaluate(n, EvalContext{}), n->span);
  } catch (const std::exception&) {
    return n;
  }
}

ExprPtr remove_neutral(const ExprPtr& e) {
  ExprPtr n = map_children(e, remove_neutral);
  if (n->kind == ExprKind::Unary) {
    const ExprPtr& a = n->args[0];
    if (a->kind == ExprKind::Unary && a->uop == n->uop) return a->args[0];
    return n;
  }
  if (n->kind != ExprKind::Binary) return n;
  const ExprPtr& a = n->args[0];
  const ExprPtr& b = n->args[1];
  switch (n->bop) {
    case BinaryOp::And:
      if (is_bool_lit(b, Ternary::True)) return a;
      if (is_bool_lit(a, Ternary::True)) return b;
      break;
    case BinaryOp::Or:
      if (is_bool_lit(b, Ternary::False)) return a;
      if (is_bool_lit(a, Ternary::False)) return b;
      break;
    case BinaryOp::Add:
      if (is_number_lit(b, 0)) return a;
      if (is_number_lit(a, 0)) return b;
      break;
    case BinaryOp::Sub:
      if (is_number_lit(b, 0)) return a;
      break;
    case BinaryOp::Mul:
      if (is_number_lit(b, 1)) return a;
      if (is_number_lit(a, 1)) return b;
      break;
    case BinaryOp::Div:
    case BinaryOp::Pow:
      if (is_number_lit(b, 1)) return a;
      break;
    default:
      break;
  }
  return n;
}

namespace {

ExprPtr merge_rec(const ExprPtr& e, const TypeAnnotations& ann) {
  const bool is_numeric = numeric(ann, e.get());
  ExprPtr n = map_children(e, [&](const ExprPtr& a) { return merge_rec(a, ann); });

  if (n->kind == ExprKind::Cond) {
    const ExprPtr& c = n->args[0];
    if (structurally_equal(n->args[1], n->args[2])) return n->args[1];
    // if c then (if c then a else b) else d  =>  if c then a else d
    ExprPtr t = n->args[1], f = n->args[2];
    if (t->kind == ExprKind::Cond && structurally_equal(t->args[0], c)) t = t->args[1];
    if (f->kind == ExprKind::Cond && structurally_equal(f->args[0], c)) f = f->args[2];
    if (t != n->args[1] || f != n->args[2]) return ast::cond(c, t, f, n->span);
    return n;
  }

  if (n->kind == ExprKind::Binary && (n->bop == BinaryOp::And || n->bop == BinaryOp::Or)) {
    std::vector<ExprPtr> items;
    flatten_same(n, n->bop, items);
    std::vector<ExprPtr> kept;
    bool changed = false;
    for (const auto& it : items) {
      if (std::any_of(kept.begin(), kept.end(), [&](const ExprPtr& k) { return structurally_equal(k, it); })) {
        changed = true;
        continue;
      }
      kept.push_back(it);
    }
    // In a conjunction every other conjunct may be assumed true; in a
    // disjunction every other disjunct may be assumed false.
    const bool conj = n->bop == BinaryOp::And;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (kept[i]->kind != ExprKind::Cond) continue;
      for (std::size_t j = 0; j < kept.size(); ++j) {
        if (i == j) continue;
        const ExprPtr& c = kept[i]->args[0];
        const ExprPtr& other = kept[j];
        const bool same = structurally_equal(other, c);
        const bool negated = other->kind == ExprKind::Unary && other->uop == UnaryOp::Not &&
                             structurally_equal(other->args[0], c);
        if (same || negated) {
          const bool c_true = conj ? same : negated;
          kept[i] = kept[i]->args[c_true ? 1 : 2];
          changed = true;
          break;
        }
      }
    }
    return changed ? build_chain(n->bop, kept) : n;
  }

  if (is_numeric && sum_chain(n)) {
    std::vector<Term> raw;
    flatten_sum(n, 1.0, raw);
    std::vector<Term> merged;
    bool changed = false;
    for (Term t : raw) {
      if (t.expr->kind == ExprKind::Binary && t.expr->bop == BinaryOp::Mul) {
        if (auto k = coefficient(t.expr->args[0])) t = {t.coef * *k, t.expr->args[1]};
        else if (auto k2 = coefficient(t.expr->args[1])) t = {t.coef * *k2, t.expr->args[0]};
      }
      if (is_lit(t.expr)) {
        auto lit = std::find_if(merged.begin(), merged.end(), [](const Term& m) { return is_lit(m.expr); });
        if (lit != merged.end()) {
          try {
            Value sum = arith(BinaryOp::Add, arith(BinaryOp::Mul, Value::number(lit->coef), lit->expr->value),
                              arith(BinaryOp::Mul, Value::number(t.coef), t.expr->value));
            if (sum.is_number() && !sum.is_tainted() && sum.range().hi < 0)
              *lit = {-1.0, ast::literal(apply_unary(UnaryOp::Neg, sum))};
            else
              *lit = {1.0, ast::literal(sum)};
            changed = true;
            continue;
          } catch (const std::exception&) {
          }
        }
        merged.push_back(t);
        continue;
      }
      auto same = std::find_if(merged.begin(), merged.end(),
                               [&](const Term& m) { return !is_lit(m.expr) && structurally_equal(m.expr, t.expr); });
      if (same != merged.end()) {
        same->coef += t.coef;
        changed = true;
      } else {
        merged.push_back(t);
      }
    }
    if (!changed) return n;
    for (Term& t : merged)
      if (t.coef == 0) t = {1.0, bin(BinaryOp::Mul, num(0), t.expr)};
    return build_sum(merged);
  }
  return n;
}

bool sorted_by_key(const std::vector<ExprPtr>& items, std::vector<ExprPtr>& sorted) {
  sorted = items;
  std::stable_sort(sorted.begin(), sorted.end(), [](const ExprPtr& a, const ExprPtr& b) {
    if (is_lit(a) || is_lit(b)) return !is_lit(a) && is_lit(b);
    return sort_key(a) < sort_key(b);
  });
  for (std::size_t i = 0; i < items.size(); ++i)
    if (items[i] != sorted[i]) return true;
  return false;
}

ExprPtr reorder_rec(const ExprPtr& e, const TypeAnnotations& ann) {
  const bool is_numeric = numeric(ann, e.get());
  const bool lhs_numeric = e->kind == ExprKind::Binary && is_relational(e->bop) && numeric(ann, e->args[0].get());
  ExprPtr n = map_children(e, [&](const ExprPtr& a) { return reorder_rec(a, ann); });

  if (n->kind == ExprKind::Binary && (n->bop == BinaryOp::And || n->bop == BinaryOp::Or ||
                                      (is_numeric && n->bop == BinaryOp::Mul))) {
    std::vector<ExprPtr> items, sorted;
    flatten_same(n, n->bop, items);
    return sorted_by_key(items, sorted) ? build_chain(n->bop, sorted) : n;
  }

  if (is_numeric && sum_chain(n) && n->kind == ExprKind::Binary) {
    std::vector<Term> terms;
    flatten_sum(n, 1.0, terms);
    std::vector<Term> sorted = terms;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Term& a, const Term& b) {
      if (is_lit(a.expr) || is_lit(b.expr)) return !is_lit(a.expr) && is_lit(b.expr);
      return sort_key(a.expr) < sort_key(b.expr);
    });
    bool changed = false;
    for (std::size_t i = 0; i < terms.size(); ++i) changed |= terms[i].expr != sorted[i].expr;
    return changed ? build_sum(sorted) : n;
  }

  if (lhs_numeric) {
    const ExprPtr& l = n->args[0];
    const ExprPtr& r = n->args[1];
    std::vector<Term> lt, rt;
    flatten_sum(l, 1.0, lt);
    flatten_sum(r, 1.0, rt);
    // Constant addend on the left moves to the right.
    if (lt.size() >= 2) {
      for (std::size_t i = 0; i < lt.size(); ++i) {
        if (!is_lit(lt[i].expr) || !lt[i].expr->value.is_number() || !lt[i].expr->value.range().is_point() ||
            !std::isfinite(lt[i].expr->value.range().lo))
          continue;
        const Term moved = lt[i];
        lt.erase(lt.begin() + static_cast<std::ptrdiff_t>(i));
        ExprPtr nr = bin(moved.coef > 0 ? BinaryOp::Sub : BinaryOp::Add, r, moved.expr);
        return ast::binary(n->bop, build_sum(lt), nr, n->span);
      }
    }
    // Negated term on the right moves to the left.
    if (rt.size() >= 2) {
      for (std::size_t i = 0; i < rt.size(); ++i) {
        if (rt[i].coef > 0 || is_lit(rt[i].expr)) continue;
        const Term moved = rt[i];
        rt.erase(rt.begin() + static_cast<std::ptrdiff_t>(i));
        return ast::binary(n->bop, bin(BinaryOp::Add, l, moved.expr), build_sum(rt), n->span);
      }
    }
  }
  return n;
}

}  // namespace

ExprPtr merge_terms(const ExprPtr& e, const RewriteContext& ctx) { return merge_rec(e, annotate(e, ctx)); }

ExprPtr reorder(const ExprPtr& e, const RewriteContext& ctx) { return reorder_rec(e, annotate(e, ctx)); }

ExprPtr raise_lower(const ExprPtr& e) {
  ExprPtr n = map_children(e, raise_lower);
  if (n->kind == ExprKind::Binary) {
    const ExprPtr& a = n->args[0];
    const ExprPtr& b = n->args[1];
    if (is_lit(a) && b->kind == ExprKind::Cond)
      return ast::cond(b->args[0], bin(n->bop, a, b->args[1]), bin(n->bop, a, b->args[2]), n->span);
    if (is_lit(b) && a->kind == ExprKind::Cond)
      return ast::cond(a->args[0], bin(n->bop, a->args[1], b), bin(n->bop, a->args[2], b), n->span);
  }
  if (n->kind == ExprKind::Unary && n->args[0]->kind == ExprKind::Cond) {
    const ExprPtr& c = n->args[0];
    return ast::cond(c->args[0], ast::unary(n->uop, c->args[1]), ast::unary(n->uop, c->args[2]), n->span);
  }
  if (n->kind == ExprKind::Cond) {
    const ExprPtr& t = n->args[1];
    const ExprPtr& f = n->args[2];
    if (t->kind == ExprKind::Binary && f->kind == ExprKind::Binary && t->bop == f->bop) {
      if (!is_lit(t->args[1]) && structurally_equal(t->args[1], f->args[1]))
        return bin(t->bop, ast::cond(n->args[0], t->args[0], f->args[0]), t->args[1]);
      if (!is_lit(t->args[0]) && structurally_equal(t->args[0], f->args[0]))
        return bin(t->bop, t->args[0], ast::cond(n->args[0], t->args[1], f->args[1]));
    }
  }
  return n;
}

ExprPtr special_cases(const ExprPtr& e) {
  ExprPtr n = map_children(e, special_cases);
  if (n->kind == ExprKind::Binary && is_relational(n->bop) && !(is_lit(n->args[0]) && is_lit(n->args[1]))) {
    auto ra = static_range(n->args[0]);
    auto rb = static_range(n->args[1]);
    if (ra && rb) {
      const Ternary t = compare_ranges(n->bop, *ra, *rb);
      if (t != Ternary::Maybe) return ast::literal(Value::boolean(t), n->span);
    }
  }
  if (n->kind == ExprKind::Unary && n->uop == UnaryOp::Not) {
    const ExprPtr& a = n->args[0];
    if (a->kind == ExprKind::Binary && is_relational(a->bop))
      return ast::binary(negate_relation(a->bop), a->args[0], a->args[1], n->span);
  }
  if (n->kind == ExprKind::Call && n->name == "index_of_max" && n->args.size() == 1)
    return ast::literal(Value::number(1), n->span);
  return n;
}

ExprPtr propagate(const ExprPtr& e, const RewriteContext& ctx) {
  ExprPtr n = map_children(e, [&](const ExprPtr& a) { return propagate(a, ctx); });
  if (n->kind != ExprKind::Ref || !ctx.known) return n;
  auto v = ctx.known(*n);
  if (!v || !v->is_definite()) return n;
  if (ctx.used) ctx.used(*n);
  return ast::literal(*v, n->span);
}

ExprPtr rewrite_once(const ExprPtr& e, const RewriteContext& ctx) {
  ExprPtr x = fold_constants(e);
  x = remove_neutral(x);
  x = merge_terms(x, ctx);
  x = reorder(x, ctx);
  x = raise_lower(x);
  x = special_cases(x);
  x = propagate(x, ctx);
  return x;
}

}  // namespace roadmap
