#include "roadmap/expr/eval.hpp"

#include <cmath>

#include "roadmap/expr/printer.hpp"

namespace roadmap {

namespace {

struct Override {
  RefKey key;
  Interval range;
};

bool integral(double x) { return std::isinf(x) || std::floor(x) == x; }

class Evaluator {
public:
  explicit Evaluator(const EvalContext& ctx) : ctx_(ctx) {}

  Value eval(const ExprPtr& p) {
    const Expr& e = *p;
    switch (e.kind) {
      case ExprKind::Literal: return e.value;
      case ExprKind::Time: return Value::date(static_cast<double>(ctx_.time));
      case ExprKind::Interval: {
        Value lo = eval(e.args[0]);
        Value hi = eval(e.args[1]);
        return hull(lo, hi);
      }
      case ExprKind::Ref:
      case ExprKind::Ident: return eval_reference(e);
      case ExprKind::Unary: return apply_unary(e.uop, eval(e.args[0]));
      case ExprKind::Binary: return apply_binary(e.bop, eval(e.args[0]), eval(e.args[1]));
      case ExprKind::Cond: return eval_cond(e);
      case ExprKind::Aggregate:
        throw EvalError("aggregation " + e.name + " must be expanded before evaluation", e.span);
      case ExprKind::Call: {
        std::vector<Value> args;
        args.reserve(e.args.size());
        for (const auto& a : e.args) args.push_back(eval(a));
        return apply_function(e.name, args);
      }
      case ExprKind::UnitCast: {
        Value v = eval(e.args[0]);
        if (!v.is_number() || v.as_number().unit != e.unit)
          throw ValueError(ValueError::Kind::UnitMismatch,
                           "cannot cast " + v.type().to_string() + " to " + ExprType::number(e.unit).to_string());
        return v;
      }
    }
    throw EvalError("unknown expression node", e.span);
  }

private:
  Value fetch(const Expr& e, long long month, bool record) {
    if (e.kind == ExprKind::Ident) {
      if (!ctx_.lookup_ident) throw EvalError("unresolved identifier '" + to_source(std::make_shared<Expr>(e)) + "'", e.span);
      return ctx_.lookup_ident(e, month);
    }
    RefKey key{e.ref, month};
    if (!ctx_.lookup) throw EvalError("no value for reference '" + e.ref.label() + "'", e.span);
    if (record && ctx_.reads) ctx_.reads->push_back(key);
    Value v = ctx_.lookup(key);
    for (const auto& o : overrides_)
      if (o.key == key) v = v.with_range(intersect(v.range(), o.range));
    return v;
  }

  Value eval_reference(const Expr& e) {
    Value t = eval(e.time_arg());
    if (!t.is_date()) throw ValueError(ValueError::Kind::Type, "time argument must be a date");
    Interval r = t.range();
    if (r.empty) return Value::tainted(fetch(e, ctx_.time, false).type());
    if (r.is_point() && integral(r.lo) && std::isfinite(r.lo))
      return fetch(e, static_cast<long long>(r.lo), true);
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.hi - r.lo > static_cast<double>(ctx_.max_time_span))
      return Value::top(fetch(e, ctx_.time, false).type());
    auto first = static_cast<long long>(std::floor(r.lo));
    auto last = static_cast<long long>(std::ceil(r.hi));
    Value acc = fetch(e, first, true);
    for (long long m = first + 1; m <= last; ++m) acc = hull(acc, fetch(e, m, true));
    return acc;
  }

  // Recognizes `R = k` with R a ?replacement reference at a definite month
  // and k an integer constant.
  std::optional<std::pair<RefKey, double>> replacement_test(const Expr& c) {
    if (!ctx_.path_sensitive || c.kind != ExprKind::Binary || c.bop != BinaryOp::Eq) return std::nullopt;
    const Expr* r = c.args[0].get();
    ExprPtr k = c.args[1];
    if (r->kind != ExprKind::Ref) {
      r = c.args[1].get();
      k = c.args[0];
    }
    if (r->kind != ExprKind::Ref || r->ref.kind != RefKind::Replacement) return std::nullopt;
    auto kv = constant_value(k);
    if (!kv || !kv->is_number() || !kv->range().is_point() || !integral(kv->range().lo)) return std::nullopt;
    Value t = eval(r->time_arg());
    Interval tr = t.range();
    if (!t.is_date() || !tr.is_point() || !integral(tr.lo) || !std::isfinite(tr.lo)) return std::nullopt;
    return std::make_pair(RefKey{r->ref, static_cast<long long>(tr.lo)}, kv->range().lo);
  }

  Value eval_cond(const Expr& e) {
    Value c = eval(e.args[0]);
    if (!c.is_bool()) throw ValueError(ValueError::Kind::Type, "condition must be boolean");
    if (c.is_tainted()) {
      Value t = eval(e.args[1]);
      return Value::tainted(t.type());
    }
    Ternary cv = c.as_bool().value;
    if (cv == Ternary::True) return eval(e.args[1]);
    if (cv == Ternary::False) return eval(e.args[2]);

    auto test = replacement_test(*e.args[0]);
    if (!test) return hull(eval(e.args[1]), eval(e.args[2]));

    const auto& [key, k] = *test;
    Interval current = fetch_quiet(key);
    Interval then_range = intersect(current, Interval::point(k));
    Interval else_range = current;
    if (current.lo == k && current.hi == k) else_range = Interval::tainted();
    else if (current.lo == k) else_range.lo = k + 1;
    else if (current.hi == k) else_range.hi = k - 1;

    std::optional<Value> then_v;
    std::optional<Value> else_v;
    if (!then_range.empty) then_v = with_override(key, then_range, e.args[1]);
    if (!else_range.empty) else_v = with_override(key, else_range, e.args[2]);
    if (then_v && else_v) return hull(*then_v, *else_v);
    if (then_v) return *then_v;
    if (else_v) return *else_v;
    return hull(eval(e.args[1]), eval(e.args[2]));
  }

  Interval fetch_quiet(const RefKey& key) {
    Value v = ctx_.lookup(key);
    Interval r = v.range();
    for (const auto& o : overrides_)
      if (o.key == key) r = intersect(r, o.range);
    return r;
  }

  Value with_override(const RefKey& key, Interval r, const ExprPtr& branch) {
    overrides_.push_back({key, r});
    Value v = eval(branch);
    overrides_.pop_back();
    return v;
  }

  const EvalContext& ctx_;
  std::vector<Override> overrides_;
};

}  // namespace

Value evaluate(const ExprPtr& e, const EvalContext& ctx) { return Evaluator(ctx).eval(e); }

bool mentions_time_or_refs(const ExprPtr& e) {
  if (e->kind == ExprKind::Time || e->kind == ExprKind::Ident || e->kind == ExprKind::Ref ||
      e->kind == ExprKind::Aggregate)
    return true;
  for (const auto& a : e->args)
    if (mentions_time_or_refs(a)) return true;
  return false;
}

std::optional<Value> constant_value(const ExprPtr& e) {
  if (e->kind == ExprKind::Literal) return e->value;
  if (mentions_time_or_refs(e)) return std::nullopt;
  try {
    return evaluate(e, EvalContext{});
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

namespace {
void collect(const ExprPtr& e, std::vector<ReferenceUse>& out) {
  if (e->kind == ExprKind::Ident) out.push_back({e->path, e.get(), e->span});
  if (e->kind == ExprKind::Ref) out.push_back({{}, e.get(), e->span});
  for (const auto& a : e->args) collect(a, out);
}
}  // namespace

std::vector<ReferenceUse> extract_references(const ExprPtr& e) {
  std::vector<ReferenceUse> out;
  collect(e, out);
  return out;
}

}  // namespace roadmap
