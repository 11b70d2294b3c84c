#include "roadmap/expr/typecheck.hpp"

#include "roadmap/expr/eval.hpp"
#include "roadmap/expr/printer.hpp"

namespace roadmap {

namespace {

struct Checker {
  const TypeEnv& env;
  TypeAnnotations* notes;

  ExprType note(const Expr& e, ExprType t) {
    if (notes) (*notes)[&e] = t;
    return t;
  }

  [[noreturn]] void fail(const std::string& msg, std::vector<Span> spans) { throw TypeError(msg, std::move(spans)); }

  template <class F>
  ExprType guarded(F&& f, std::vector<Span> spans) {
    try {
      return f();
    } catch (const ValueError& err) {
      fail(err.what(), std::move(spans));
    }
  }

  ExprType check(const ExprPtr& p) {
    const Expr& e = *p;
    switch (e.kind) {
      case ExprKind::Literal: return note(e, e.value.type());
      case ExprKind::Time: return note(e, ExprType::date());
      case ExprKind::Interval: {
        ExprType lo = check(e.args[0]);
        ExprType hi = check(e.args[1]);
        if (!(lo == hi))
          fail("interval bounds differ in type: " + lo.to_string() + " vs " + hi.to_string(),
               {e.args[0]->span, e.args[1]->span});
        return note(e, lo);
      }
      case ExprKind::Ident:
      case ExprKind::Ref: {
        ExprType t = check(e.time_arg());
        if (t.kind != TypeKind::Date)
          fail("time argument must be a date, got " + t.to_string(), {e.time_arg()->span});
        auto r = env(e);
        if (!r) {
          std::string name = e.kind == ExprKind::Ref ? e.ref.label() : to_source(p);
          fail("unknown reference '" + name + "'", {e.span});
        }
        return note(e, *r);
      }
      case ExprKind::Unary: {
        ExprType a = check(e.args[0]);
        return note(e, guarded([&] { return unary_result_type(e.uop, a); }, {e.span}));
      }
      case ExprKind::Binary: {
        ExprType a = check(e.args[0]);
        ExprType b = check(e.args[1]);
        std::optional<Value> rhs;
        if (e.bop == BinaryOp::Pow) rhs = constant_value(e.args[1]);
        return note(e, guarded([&] { return binary_result_type(e.bop, a, b, rhs ? &*rhs : nullptr); },
                               {e.args[0]->span, e.args[1]->span}));
      }
      case ExprKind::Cond: {
        ExprType c = check(e.args[0]);
        if (c.kind != TypeKind::Boolean) fail("condition must be boolean, got " + c.to_string(), {e.args[0]->span});
        ExprType t = check(e.args[1]);
        ExprType f = check(e.args[2]);
        if (!(t == f))
          fail("branches differ in type: " + t.to_string() + " vs " + f.to_string(), {e.args[1]->span, e.args[2]->span});
        return note(e, t);
      }
      case ExprKind::Aggregate: {
        ExprType b = check(e.args[0]);
        const std::string& n = e.name;
        if (n == "AND" || n == "OR") {
          if (b.kind != TypeKind::Boolean) fail(n + " expects a boolean body", {e.args[0]->span});
        } else if (n == "SUM") {
          if (b.kind != TypeKind::Number && b.kind != TypeKind::Duration) fail("SUM expects a number", {e.args[0]->span});
        } else if (n == "PRODUCT") {
          if (b.kind != TypeKind::Number || !b.unit.is_dimensionless())
            fail("PRODUCT expects a dimensionless number", {e.args[0]->span});
        } else if (n == "MIN" || n == "MAX") {
          if (b.kind == TypeKind::Boolean) fail(n + " expects ordered values", {e.args[0]->span});
        }
        return note(e, b);
      }
      case ExprKind::Call: {
        std::vector<ExprType> types;
        std::vector<Span> spans;
        for (const auto& a : e.args) {
          types.push_back(check(a));
          spans.push_back(a->span);
        }
        if (spans.empty()) spans.push_back(e.span);
        return note(e, guarded([&] { return function_result_type(e.name, types); }, spans));
      }
      case ExprKind::UnitCast: {
        ExprType a = check(e.args[0]);
        ExprType target = ExprType::number(e.unit);
        if (!(a == target))
          fail("cannot cast " + a.to_string() + " to " + target.to_string(), {e.args[0]->span});
        return note(e, target);
      }
    }
    fail("unknown expression node", {e.span});
  }
};

}  // namespace

ExprType typecheck(const ExprPtr& e, const TypeEnv& env, TypeAnnotations* annotations) {
  Checker c{env, annotations};
  return c.check(e);
}

}  // namespace roadmap
