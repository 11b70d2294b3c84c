#include <doctest.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "expr_gen.hpp"
#include "roadmap/expr/eval.hpp"
#include "roadmap/expr/parser.hpp"
#include "roadmap/expr/printer.hpp"
#include "roadmap/lowering/lowering.hpp"
#include "roadmap/solver/rewrite.hpp"
#include "roadmap/solver/solver.hpp"
#include "roadmap/values/date.hpp"
#include "system_gen.hpp"

using namespace roadmap;

namespace {

const std::string kRoot = ROADMAP_SOURCE_DIR;

ExprPtr listing_expr(std::string_view src) {
  ParseOptions opts;
  opts.listing = true;
  return parse_expr(src, opts);
}

RewriteContext numeric_context() {
  RewriteContext rc;
  rc.types = [](const Expr& n) -> std::optional<ExprType> {
    if (n.kind != ExprKind::Ref) return std::nullopt;
    return n.ref.name.rfind("b", 0) == 0 ? ExprType::boolean() : ExprType::number();
  };
  return rc;
}

const Value& value_of(const ConstraintSystem& cs, const SolveResult& r, const std::string& label) {
  const Constraint* c = cs.find(label);
  REQUIRE_MESSAGE(c != nullptr, label);
  return r.values[static_cast<std::size_t>(c - cs.constraints.data())];
}

ConstraintSystem lower_text(const std::string& src) { return lower(parse_model(src)); }

ConstraintSystem without(const ConstraintSystem& cs, std::size_t i) {
  ConstraintSystem out = cs;
  out.constraints.erase(out.constraints.begin() + static_cast<std::ptrdiff_t>(i));
  out.reindex();
  return out;
}

// Identifiers of the generated expressions become references so that
// propagation has something to act on.
ExprPtr idents_to_refs(const ExprPtr& e) {
  if (e->kind == ExprKind::Ident) {
    std::string block = e->path.size() > 1 ? e->path.front() : "B";
    return ast::ref(Reference::property(block, e->path.back()), idents_to_refs(e->time_arg()));
  }
  if (e->args.empty()) return e;
  std::vector<ExprPtr> args;
  for (const auto& a : e->args) args.push_back(idents_to_refs(a));
  return ast::with_args(*e, std::move(args));
}

// Point values for references, drawn lazily and shared by every evaluation
// of one sample.
class PointEnv {
public:
  explicit PointEnv(std::uint64_t seed) : rng_(seed) {}

  Value get(const RefKey& k) {
    auto key = std::make_pair(k.ref.id(), k.month);
    auto it = values_.find(key);
    if (it != values_.end()) return it->second;
    Value v = draw(k.ref.name);
    values_.emplace(key, v);
    return v;
  }

private:
  Value draw(const std::string& name) {
    std::uniform_int_distribution<int> small(-20, 20);
    switch (name[0]) {
      case 'a': return Value::number(small(rng_) * 0.5, Unit::base(Dim::Current));
      case 'b': return Value::boolean(small(rng_) >= 0);
      case 'd': return Value::date(static_cast<double>(month_index(2000 + small(rng_) + 20, 1)));
      case 'u': return Value::duration(static_cast<double>(small(rng_) + 20));
      default: return Value::number(small(rng_) * 0.25);
    }
  }
  std::mt19937_64 rng_;
  std::map<std::pair<std::string, long long>, Value> values_;
};

// `outer` covers `inner` up to rounding differences from reassociation.
bool covers(const Value& outer, const Value& inner) {
  if (inner.is_tainted()) return true;
  if (outer.is_tainted()) return false;
  if (outer.kind() != inner.kind()) return false;
  if (outer.is_bool()) {
    return outer.as_bool().value == Ternary::Maybe || outer.as_bool().value == inner.as_bool().value;
  }
  const Interval o = outer.range();
  const Interval i = inner.range();
  auto slack = [](double x) { return std::isfinite(x) ? 1e-9 * (1.0 + std::fabs(x)) : 0.0; };
  return o.lo - slack(o.lo) <= i.lo && i.hi <= o.hi + slack(o.hi);
}

using Rule = std::function<ExprPtr(const ExprPtr&, const RewriteContext&)>;

}  // namespace

TEST_SUITE("rewrite rules") {
  TEST_CASE("constant folding") {
    auto e = fold_constants(listing_expr("if max(2, 3) >= 2.5 then 1 else 2"));
    CHECK(to_source(e) == "1");
    CHECK(to_source(fold_constants(listing_expr("false & B.b(T)"))) == "false");
    CHECK(to_source(fold_constants(listing_expr("B.b(T) | true"))) == "true");
    CHECK(to_source(fold_constants(listing_expr("B.x(T) + 2 * 3"))) == "B.x(T) + 6");
  }

  TEST_CASE("neutral element removal") {
    CHECK(to_source(remove_neutral(listing_expr("B.y(T) & true"))) == "B.y(T)");
    CHECK(to_source(remove_neutral(listing_expr("(B.y(T) + 0) * 1 / 1"))) == "B.y(T)");
    CHECK(to_source(remove_neutral(listing_expr("--B.y(T)"))) == "B.y(T)");
    CHECK(to_source(remove_neutral(listing_expr("!!(B.y(T) > 1)"))) == "B.y(T) > 1");
    CHECK(to_source(remove_neutral(listing_expr("B.y(T) - 1"))) == "B.y(T) - 1");
  }

  TEST_CASE("reordering") {
    const RewriteContext rc = numeric_context();
    auto e = listing_expr("B.x(T) + 2 = -B.x(T) + 3");
    e = reorder(e, rc);
    CHECK(to_source(e) == "B.x(T) = -B.x(T) + 3 - 2");
    e = reorder(e, rc);
    CHECK(to_source(e) == "B.x(T) + B.x(T) = 3 - 2");
    CHECK(to_source(reorder(listing_expr("3 + B.z(T) + B.a(T)"), rc)) == "B.a(T) + B.z(T) + 3");
    // Dates are left alone.
    CHECK(to_source(reorder(listing_expr("Jan2020 + months(3)"), rc)) == "Jan2020 + months(3)");
  }

  TEST_CASE("raising and lowering") {
    auto raised = raise_lower(listing_expr("2 * (if B.b(T) then 3 else 4)"));
    CHECK(to_source(raised) == "if B.b(T) then 2 * 3 else 2 * 4");
    CHECK(to_source(fold_constants(raised)) == "if B.b(T) then 6 else 8");
    auto lowered = raise_lower(listing_expr("if B.b(T) then B.x(T) * B.y(T) else 3 * B.y(T)"));
    CHECK(to_source(lowered) == "(if B.b(T) then B.x(T) else 3) * B.y(T)");
  }

  TEST_CASE("merging") {
    const RewriteContext rc = numeric_context();
    CHECK(to_source(merge_terms(listing_expr("B.y(T) + B.y(T)"), rc)) == "2 * B.y(T)");
    CHECK(to_source(merge_terms(listing_expr("B.y(T) - B.y(T)"), rc)) == "0 * B.y(T)");
    CHECK(to_source(merge_terms(listing_expr("B.x(T) + 2 - 5"), rc)) == "B.x(T) - 3");
    auto e = merge_terms(listing_expr("(B.x(T) < B.y(T)) & (if B.x(T) < B.y(T) then B.z1(T) else B.z2(T))"), rc);
    CHECK(to_source(e) == "B.x(T) < B.y(T) & B.z1(T)");
    auto f = merge_terms(listing_expr("!B.b(T) & (if B.b(T) then B.p(T) else B.q(T))"), rc);
    CHECK(to_source(f) == "!B.b(T) & B.q(T)");
    CHECK(to_source(merge_terms(listing_expr("B.b(T) | B.b(T)"), rc)) == "B.b(T)");
    CHECK(to_source(merge_terms(listing_expr("if B.b(T) then B.x(T) else B.x(T)"), rc)) == "B.x(T)");
  }

  TEST_CASE("special cases") {
    CHECK(to_source(special_cases(listing_expr("linear(B.x(T), B.x1(T), 0, B.x2(T), 1) >= 0"))) == "true");
    CHECK(to_source(special_cases(listing_expr("num(B.b(T)) > 1"))) == "false");
    CHECK(to_source(special_cases(listing_expr("B.x(T) ^ 2 >= 0"))) == "true");
    CHECK(to_source(special_cases(listing_expr("sin(B.x(T)) <= 1"))) == "true");
    CHECK(to_source(special_cases(listing_expr("!(B.x(T) < 3)"))) == "B.x(T) >= 3");
    CHECK(to_source(special_cases(listing_expr("index_of_max(B.x(T))"))) == "1");
    CHECK(to_source(special_cases(listing_expr("sin(B.x(T)) <= 0.5"))) == "sin(B.x(T)) <= 0.5");
  }

  TEST_CASE("propagation keeps unknown references") {
    RewriteContext rc;
    std::vector<std::string> used;
    rc.known = [](const Expr& n) -> std::optional<Value> {
      if (n.ref.name == "x") return Value::number(4);
      if (n.ref.name == "w") return Value::number(Interval{1, 5, false});
      return std::nullopt;
    };
    rc.used = [&](const Expr& n) { used.push_back(n.ref.name); };
    auto e = propagate(listing_expr("B.x(T) + B.y(T) + B.w(T)"), rc);
    CHECK(to_source(e) == "4 + B.y(T) + B.w(T)");
    CHECK(used == std::vector<std::string>{"x"});
  }

  TEST_CASE("each family preserves the value at sampled points") {
    const std::vector<std::pair<const char*, Rule>> families = {
        {"fold", [](const ExprPtr& e, const RewriteContext&) { return fold_constants(e); }},
        {"neutral", [](const ExprPtr& e, const RewriteContext&) { return remove_neutral(e); }},
        {"merge", [](const ExprPtr& e, const RewriteContext& rc) { return merge_terms(e, rc); }},
        {"reorder", [](const ExprPtr& e, const RewriteContext& rc) { return reorder(e, rc); }},
        {"raise_lower", [](const ExprPtr& e, const RewriteContext&) { return raise_lower(e); }},
        {"special", [](const ExprPtr& e, const RewriteContext&) { return special_cases(e); }},
        {"propagate", [](const ExprPtr& e, const RewriteContext& rc) { return propagate(e, rc); }},
        {"all", [](const ExprPtr& e, const RewriteContext& rc) {
           ExprPtr x = e;
           for (int i = 0; i < 4; ++i) x = rewrite_once(x, rc);
           return x;
         }},
    };
    gen::ExprGen g(0x5eed);
    std::mt19937_64 rng(42);
    int compared = 0;
    for (int n = 0; n < 300; ++n) {
      const gen::Ty ty = g.random_type();
      const ExprPtr e = idents_to_refs(g.make(ty, 1 + n % 4));
      for (const auto& [fam, rule] : families) {
        const std::string name = fam;
        for (int s = 0; s < 100; ++s) {
          const long long now = month_index(2020 + static_cast<int>(rng() % 20), 1 + static_cast<int>(rng() % 12));
          PointEnv env(rng());
          EvalContext ctx;
          ctx.time = now;
          ctx.lookup = [&](const RefKey& k) { return env.get(k); };
          RewriteContext rc;
          rc.types = [](const Expr& node) -> std::optional<ExprType> {
            return node.kind == ExprKind::Ref ? gen::type_of_name(node.ref.name) : std::nullopt;
          };
          rc.known = [&](const Expr& node) -> std::optional<Value> {
            EvalContext tctx;
            tctx.time = now;
            Value t = evaluate(node.time_arg(), tctx);
            if (!t.range().is_point()) return std::nullopt;
            return env.get(RefKey{node.ref, static_cast<long long>(t.range().lo)});
          };
          Value before;
          try {
            before = evaluate(e, ctx);
          } catch (const std::exception&) {
            continue;
          }
          const ExprPtr after_expr = rule(e, rc);
          Value after;
          try {
            after = evaluate(after_expr, ctx);
          } catch (const std::exception& ex) {
            FAIL_CHECK(name << ": " << to_source(e) << " => " << to_source(after_expr) << " threw " << ex.what());
            continue;
          }
          ++compared;
          if (!covers(after, before)) {
            FAIL_CHECK(name << ": " << to_source(e) << " = " << before.to_exact_string() << " but "
                            << to_source(after_expr) << " = " << after.to_exact_string());
          }
        }
      }
    }
    CHECK(compared > 100000);
  }

  TEST_CASE("time substitution") {
    auto e = substitute_time(listing_expr("B.x(T - months(1)) + num(T >= Jan2022)"), month_index(2030, 1));
    CHECK(to_source(e) == "B.x(Jan2030 - months(1)) + num(Jan2030 >= Jan2022)");
  }
}

TEST_SUITE("relational narrowing") {
  TEST_CASE("examples") {
    const Value x = Value::number(Interval{0, 10, false});
    CHECK(narrow_relation(x, BinaryOp::Ge, Value::number(4)) == Value::number(Interval{4, 10, false}));
    CHECK(narrow_relation(x, BinaryOp::Le, Value::number(12)) == x);
    CHECK(narrow_relation(Value::number(Interval{0, 3, false}), BinaryOp::Ge, Value::number(5)).is_tainted());
    CHECK(narrow_relation(x, BinaryOp::Lt, Value::number(Interval{2, 6, false})) ==
          Value::number(Interval{0, 6, false}));
    CHECK(narrow_relation(x, BinaryOp::Eq, Value::number(Interval{8, 20, false})) ==
          Value::number(Interval{8, 10, false}));
    CHECK(narrow_relation(x, BinaryOp::Ne, Value::number(3)) == x);
  }

  TEST_CASE("narrowing keeps every witness") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> d(-10, 10);
    const BinaryOp ops[] = {BinaryOp::Lt, BinaryOp::Le, BinaryOp::Gt, BinaryOp::Ge, BinaryOp::Eq, BinaryOp::Ne};
    for (int n = 0; n < 2000; ++n) {
      int a = d(rng), b = d(rng), c = d(rng), e = d(rng);
      if (a > b) std::swap(a, b);
      if (c > e) std::swap(c, e);
      const BinaryOp op = ops[n % 6];
      const Value out = narrow_relation(Value::number(Interval{double(a), double(b), false}), op,
                                        Value::number(Interval{double(c), double(e), false}));
      for (int x = a; x <= b; ++x)
        for (int y = c; y <= e; ++y) {
          bool holds = false;
          switch (op) {
            case BinaryOp::Lt: holds = x < y; break;
            case BinaryOp::Le: holds = x <= y; break;
            case BinaryOp::Gt: holds = x > y; break;
            case BinaryOp::Ge: holds = x >= y; break;
            case BinaryOp::Eq: holds = x == y; break;
            default: holds = x != y; break;
          }
          if (holds) CHECK(out.range().contains(double(x)));
        }
    }
  }
}

TEST_SUITE("solver") {
  TEST_CASE("fuse model at Jan2030") {
    const ConstraintSystem cs = lower(load_model(kRoot + "/models/fuse.rdm"));
    const auto start = std::chrono::steady_clock::now();
    const SolveResult r = solve(cs, month_index(2030, 1));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(r.converged);
    CHECK(secs < 1.0);
    const Value total = value_of(cs, r, "Vehicle.TotalCurrent");
    CHECK(total.range().lo >= 49.60);
    CHECK(total.range().hi <= 49.68);
    CHECK(total.to_string() == "49.64A");
    CHECK(value_of(cs, r, "Fuse.?replacement") == Value::number(1));
    CHECK(value_of(cs, r, "Fuse.MaxLoadCurrent").to_string() == "50A");
    CHECK(value_of(cs, r, "Fuse.?availability") == Value::boolean(true));
    CHECK(value_of(cs, r, "EFuse.?availability") == Value::boolean(false));
    // BlFuse has no watchdog, so error detection and the feature fail.
    CHECK(value_of(cs, r, "ErrorDetection.?availability") == Value::boolean(false));
    CHECK(value_of(cs, r, "AutonomousDriving.?availability") == Value::boolean(false));
    for (const Value& v : r.values) CHECK_FALSE(v.is_tainted());
  }

  TEST_CASE("both fuses available selects the one with the watchdog") {
    const ConstraintSystem cs = lower(load_model(kRoot + "/models/fuse.rdm"));
    const SolveResult r = solve(cs, month_index(2025, 6));
    CHECK(value_of(cs, r, "EFuse.?availability") == Value::boolean(true));
    CHECK(value_of(cs, r, "Fuse.?replacement") == Value::number(2));
    CHECK(value_of(cs, r, "Fuse.MaxLoadCurrent").to_string() == "45A");
  }

  TEST_CASE("undecided replacement keeps both branch values") {
    const ConstraintSystem cs = lower(load_model(kRoot + "/models/fuse.rdm"));
    const SolveResult r = solve(cs, month_index(2024, 1));
    CHECK(value_of(cs, r, "EFuse.?availability") == Value::boolean(Ternary::Maybe));
    CHECK(value_of(cs, r, "Fuse.?replacement") == Value::number(Interval{1, 2, false}));
    CHECK(value_of(cs, r, "Fuse.MaxLoadCurrent").to_string() == "[45A..50A]");
  }

  TEST_CASE("a literal converges in two rounds") {
    const ConstraintSystem cs = lower_text("model M { block B { prop x = 5 } }");
    const SolveResult r = solve(cs, 0);
    CHECK(r.converged);
    CHECK(r.rounds <= 2);
    CHECK(value_of(cs, r, "B.x") == Value::number(5));
  }

  TEST_CASE("a cycle without information stays unbounded") {
    const ConstraintSystem cs = lower_text("model M { block B { prop x : num = y  prop y : num = x } }");
    const SolveResult r = solve(cs, 0);
    CHECK(r.converged);
    CHECK(value_of(cs, r, "B.x").range().is_whole());
    CHECK(value_of(cs, r, "B.y").range().is_whole());
  }

  TEST_CASE("backward narrowing through a sum") {
    const ConstraintSystem cs =
        lower_text("model M { block B { prop s : num = 10  prop x : num = s - y  prop y : num = [0..4] } }");
    const SolveResult r = solve(cs, 0);
    CHECK(r.converged);
    CHECK(value_of(cs, r, "B.x") == Value::number(Interval{6, 10, false}));
  }

  TEST_CASE("contradictions show up as taint with a trace") {
    const ConstraintSystem cs =
        lower_text("model M { block B { prop x : num = sqrt(-4)  prop y : num = x + 1  prop z : num = 3 } }");
    const SolveResult r = solve(cs, 0);
    CHECK(r.converged);
    CHECK(value_of(cs, r, "B.x").is_tainted());
    CHECK(value_of(cs, r, "B.y").is_tainted());
    CHECK_FALSE(value_of(cs, r, "B.z").is_tainted());
    const auto y = *constraint_index(cs, cs.find("B.y")->lhs);
    CHECK(trace_elements(cs, r.traces[y]) == std::vector<std::string>{"B.x", "B.y"});
  }

  TEST_CASE("round cap on a slowly shrinking system") {
    const ConstraintSystem cs = lower_text("model M { block B { prop x : num = min(100, (x + 1) / 2) } }");
    int reports = 0;
    SolveOptions o;
    o.on_round = [&](const RoundReport&) { ++reports; };
    const SolveResult r = solve(cs, 0, o);
    CHECK_FALSE(r.converged);
    CHECK(r.rounds == 50);
    CHECK(reports == 50);
    const Value x = value_of(cs, r, "B.x");
    CHECK(x.range().hi < 1.0001);
    CHECK(x.range().contains(1.0));
    o.max_rounds = 7;
    CHECK(solve(cs, 0, o).rounds == 7);
  }

  TEST_CASE("bounds never widen between rounds") {
    const ConstraintSystem cs = lower(load_model(kRoot + "/models/fuse.rdm"));
    for (int year : {2021, 2024, 2026, 2030, 2035}) {
      std::vector<Value> prev;
      SolveOptions o;
      o.on_round = [&](const RoundReport& rep) {
        if (!prev.empty())
          for (std::size_t i = 0; i < prev.size(); ++i) CHECK(value_contains(prev[i], (*rep.bounds)[i]));
        prev = *rep.bounds;
      };
      solve(cs, month_index(year, 3), o);
    }
  }

  TEST_CASE("round dump lists changed constraints in listing form") {
    const ConstraintSystem cs = lower(load_model(kRoot + "/models/fuse.rdm"));
    std::vector<std::string> first;
    SolveOptions o;
    o.on_round = [&](const RoundReport& rep) {
      if (rep.round == 1) first = rep.changes;
    };
    solve(cs, month_index(2030, 1), o);
    REQUIRE_FALSE(first.empty());
    bool saw = false;
    for (const auto& line : first) saw |= line == "BlFuse.MaxLoadCurrent(Jan2030) = 50A";
    CHECK(saw);
  }

  TEST_CASE("time-shifted references instantiate other months") {
    const ConstraintSystem cs = lower_text(
        "model M { block B { prop g = linear(T, Jan2020, 0, Jan2030, 120)  prop d = g - g(T - months(12)) } }");
    const SolveResult r = solve(cs, month_index(2025, 1));
    CHECK(r.converged);
    const Value d = value_of(cs, r, "B.d");
    CHECK(d.range().lo == doctest::Approx(12.0));
    CHECK(d.range().hi == doctest::Approx(12.0));
    SolveOptions capped;
    capped.max_instances = 0;
    CHECK(solve(cs, month_index(2025, 1), capped).values[1].range().is_whole());
  }

  TEST_CASE("identical inputs give identical results") {
    const ConstraintSystem cs = lower(load_model(kRoot + "/models/fuse.rdm"));
    for (int year = 2021; year <= 2035; year += 2) {
      const SolveResult a = solve(cs, month_index(year, 5));
      const SolveResult b = solve(cs, month_index(year, 5));
      CHECK(a.rounds == b.rounds);
      for (std::size_t i = 0; i < a.values.size(); ++i) {
        CHECK(a.values[i].to_exact_string() == b.values[i].to_exact_string());
        CHECK(a.traces[i] == b.traces[i]);
        CHECK(to_source(a.rhs[i]) == to_source(b.rhs[i]));
      }
    }
  }

  TEST_CASE("solutions of random systems lie inside the bounds") {
    std::mt19937_64 rng(2024);
    int with_solutions = 0;
    for (int n = 0; n < 200; ++n) {
      const sysgen::System sys = sysgen::random_system(rng);
      const ConstraintSystem cs = lower_text(sys.model_text());
      const SolveResult r = solve(cs, 0);
      const auto solutions = sysgen::brute_force(sys, 10);
      with_solutions += !solutions.empty();
      for (const auto& sol : solutions)
        for (std::size_t i = 0; i < sys.size(); ++i) {
          const Value& b = value_of(cs, r, "S.x" + std::to_string(i));
          if (b.is_tainted() || !b.range().contains(sol[i])) {
            FAIL_CHECK(sys.model_text() << "\nsolution x" << i << " = " << sol[i] << " outside " << b.to_exact_string());
            break;
          }
        }
    }
    CHECK(with_solutions > 50);
  }
}

TEST_SUITE("traces") {
  TEST_CASE("a literal property traces to itself") {
    const ConstraintSystem cs = lower(load_model(kRoot + "/models/fuse.rdm"));
    const SolveResult r = solve(cs, month_index(2030, 1));
    const auto i = *constraint_index(cs, cs.find("Headlights.Current")->lhs);
    CHECK(trace_elements(cs, r.traces[i]) == std::vector<std::string>{"Vehicle.Headlights.Current"});
  }

  TEST_CASE("fuse current trace covers the total current computation") {
    const ConstraintSystem cs = lower(load_model(kRoot + "/models/fuse.rdm"));
    const SolveResult r = solve(cs, month_index(2030, 1));
    const auto i = *constraint_index(cs, cs.find("Fuse.MaxLoadCurrent")->lhs);
    const auto ids = trace_elements(cs, r.traces[i]);
    auto has = [&](const std::string& id) { return std::find(ids.begin(), ids.end(), id) != ids.end(); };
    for (const char* id : {"Vehicle.TotalCurrent", "Vehicle.ProcessingUnits.Current",
                           "Vehicle.DetectionSoftware.TFLOPS", "Vehicle.Headlights.Current",
                           "BlFuse.MaxLoadCurrent", "EFuse.?requirement2", "EFuse.MaxLoadCurrent", "Vehicle.Fuse"})
      CHECK_MESSAGE(has(id), std::string(id));
  }

  TEST_CASE("deleting constraints outside a trace keeps the bound") {
    const ConstraintSystem cs = lower(load_model(kRoot + "/models/fuse.rdm"));
    std::mt19937_64 rng(99);
    for (int k = 0; k < 5; ++k) {
      const long long t = month_index(2021 + static_cast<int>(rng() % 15), 1 + static_cast<int>(rng() % 12));
      const SolveResult full = solve(cs, t);
      for (const char* target : {"Vehicle.TotalCurrent", "Fuse.MaxLoadCurrent", "Fuse.?availability"}) {
        const Reference ref = cs.find(target)->lhs;
        const auto ti = *constraint_index(cs, ref);
        for (std::size_t d = 0; d < cs.constraints.size(); ++d) {
          if (full.traces[ti].contains(d)) continue;
          const ConstraintSystem reduced = without(cs, d);
          const SolveResult r = solve(reduced, t);
          const Value after = r.values[*constraint_index(reduced, ref)];
          CHECK_MESSAGE(after == full.values[ti], target << " after deleting " << cs.constraints[d].id() << " at "
                                                         << iso_month(t));
        }
      }
      const auto total = *constraint_index(cs, cs.find("Vehicle.TotalCurrent")->lhs);
      const auto tflops = *constraint_index(cs, cs.find("DetectionSoftware.TFLOPS")->lhs);
      CHECK(full.traces[total].contains(tflops));
      const ConstraintSystem reduced = without(cs, tflops);
      const SolveResult r = solve(reduced, t);
      CHECK_FALSE(r.values[*constraint_index(reduced, cs.constraints[total].lhs)] == full.values[total]);
    }
  }
}
