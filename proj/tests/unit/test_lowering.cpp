#include <doctest.h>

#include <random>

#include "golden.hpp"
#include "roadmap/expr/eval.hpp"
#include "roadmap/expr/parser.hpp"
#include "roadmap/lowering/lowering.hpp"
#include "roadmap/model/relations.hpp"

using namespace roadmap;

namespace {

const std::string kRoot = ROADMAP_SOURCE_DIR;

Model fuse() { return load_model(kRoot + "/models/fuse.rdm"); }

std::string rhs_of(const ConstraintSystem& cs, const std::string& lhs) {
  const Constraint* c = cs.find(lhs);
  REQUIRE_MESSAGE(c != nullptr, lhs);
  return to_source(c->rhs);
}

std::string first_error(std::string_view src) {
  try {
    lower(parse_model(src));
  } catch (const ModelError& e) {
    return e.diagnostics().front().message;
  }
  return "";
}

}  // namespace

TEST_CASE("generated system for the fuse model matches the reference listing") {
  const Model m = fuse();
  const ConstraintSystem cs = lower(m);
  const auto report = golden::compare(cs, golden::read_file(kRoot + "/tests/data/fuse_constraints.txt"));
  CHECK_MESSAGE(report.ok(), report.summary());
  CHECK(cs.constraints.size() == 47);
  CHECK(expected_constraint_count(m) == 47);
}

TEST_CASE("resolution examples") {
  const ConstraintSystem cs = lower(fuse());
  CHECK(rhs_of(cs, "Vehicle.TotalCurrent") == "Headlights.Current(T) + ProcessingUnits.Current(T)");
  CHECK(rhs_of(cs, "Fuse.?requirement1") == "Fuse.MaxLoadCurrent(T) >= Vehicle.TotalCurrent(T)");
  CHECK(rhs_of(cs, "BlFuse.?requirement1") == "BlFuse.MaxLoadCurrent(T) >= Vehicle.TotalCurrent(T)");
  CHECK(rhs_of(cs, "Fuse.?kpi1(EFuse)") == "num(EFuse.Watchdog(T))");
  CHECK(rhs_of(cs, "BlFuse.BatteryVoltage") == "48V");
  CHECK(rhs_of(cs, "Headlights.?availability") == "true");
  CHECK(rhs_of(cs, "Headlights.?replacement") == "-1");

  const Constraint* req = cs.find("Vehicle.Fuse.?requirement1");
  REQUIRE(req);
  REQUIRE(req->uses.size() == 2);
  CHECK(req->uses[0].target.id() == "Vehicle.Fuse.MaxLoadCurrent");
  CHECK(req->uses[1].target.id() == "Vehicle.TotalCurrent");
  const Constraint* inherited = cs.find("EFuse.?requirement1");
  REQUIRE(inherited);
  CHECK(inherited->inherited);
  CHECK(inherited->origins == std::vector<std::string>{"EFuse.?requirement1", "Vehicle.Fuse.?requirement1"});

  CHECK(cs.type_of(cs.find("Vehicle.TotalCurrent")->lhs)->to_string() ==
        ExprType::number(Unit::base(Dim::Current)).to_string());
}

TEST_CASE("resolution scoping") {
  const Model m = parse_model(R"(model M {
    block A {
      prop x = 1
      block B { prop x = 2 prop y = x block C { prop z = x + A.x } }
      prop w = B.C.z
      prop v = B.C
    }
  })");
  const ConstraintSystem cs = lower(m);
  CHECK(rhs_of(cs, "B.y") == "B.x(T)");
  CHECK(rhs_of(cs, "C.z") == "B.x(T) + A.x(T)");
  CHECK(rhs_of(cs, "A.w") == "C.z(T)");
  CHECK(rhs_of(cs, "A.v") == "C.?availability(T)");

  CHECK(first_error("model M { block A { prop x = nope } }").find("unresolved identifier 'nope'") != std::string::npos);
  CHECK(first_error("model M { block A { prop x = B.y } block B {} }").find("unresolved") != std::string::npos);
  CHECK(first_error("model M { block A { prop x = 1A + 2 } }").find("unit mismatch") != std::string::npos);
  CHECK(first_error("model M { block A { prop x : A = 2 } }").find("has type") != std::string::npos);
  CHECK(first_error("model M { block A { require 1 } }").find("has type") != std::string::npos);
  CHECK(first_error("model M { block A { prop x = y prop y = x } }").find("cannot infer") != std::string::npos);
  // A declared type breaks the cycle.
  CHECK(first_error("model M { block A { prop x : num = y prop y = x } }").empty());
}

TEST_CASE("aggregation identities and leaf blocks") {
  const ConstraintSystem cs = lower(parse_model(R"(model M {
    block P {
      prop all = AND(ok)
      prop any = OR(ok)
      prop s = SUM(n)
      prop p = PRODUCT(n)
      prop lo = MIN(n)
      prop hi = MAX(n)
      block X {}
    }
  })"));
  CHECK(rhs_of(cs, "P.all") == "true");
  CHECK(rhs_of(cs, "P.any") == "false");
  CHECK(rhs_of(cs, "P.s") == "0");
  CHECK(rhs_of(cs, "P.p") == "1");
  CHECK(rhs_of(cs, "P.lo") == "inf");
  CHECK(rhs_of(cs, "P.hi") == "-inf");
  CHECK(rhs_of(cs, "X.?availability") == "true");
  CHECK(rhs_of(cs, "X.?replacement") == "-1");
  CHECK(rhs_of(cs, "P.?availability") == "X.?availability(T)");
}

TEST_CASE("diamond inheritance in the generated system") {
  const ConstraintSystem cs = lower(parse_model(R"(model M {
    block A { prop P = 1 require P > 0 }
    block B implements A { prop P = 2 }
    block C implements A { prop P = 3 }
    block D implements B, C { }
  })"));
  CHECK(rhs_of(cs, "D.P") == "2");
  CHECK(rhs_of(cs, "D.?requirement1") == "D.P(T) > 0");
  // A's alternatives are B, C and D.
  CHECK(rhs_of(cs, "A.P") ==
        "if A.?replacement(T) = 1 then B.P(T) else if A.?replacement(T) = 2 then C.P(T) else if A.?replacement(T) = 3 "
        "then D.P(T) else 1");
  CHECK(rhs_of(cs, "A.?replacement").rfind("index_of_max(", 0) == 0);
}

TEST_CASE("KPI expressions resolve in each alternative's scope") {
  const char* base = R"(model M {
    block I { kpi score prop %s : num }
    block X implements I { prop score = 1 }
    block Y implements I { prop score = 2 }
  })";
  auto with_name = [&](const char* n) {
    std::string s = base;
    s.replace(s.find("%s"), 2, n);
    return s;
  };
  const ConstraintSystem a = lower(parse_model(with_name("score")));
  const ConstraintSystem b = lower(parse_model(with_name("renamed")));
  for (const char* k : {"I.?kpi1(X)", "I.?kpi1(Y)"}) CHECK(rhs_of(a, k) == rhs_of(b, k));
  CHECK(rhs_of(a, "I.?kpi1(Y)") == "Y.score(T)");
}

TEST_CASE("requirement ordinals ignore property order") {
  const ConstraintSystem a = lower(parse_model("model M { block A { prop x = 1 require x > 0 prop y = 2 require y > 0 } }"));
  const ConstraintSystem b = lower(parse_model("model M { block A { prop y = 2 require x > 0 require y > 0 prop x = 1 } }"));
  CHECK(rhs_of(a, "A.?requirement1") == rhs_of(b, "A.?requirement1"));
  CHECK(rhs_of(a, "A.?requirement2") == rhs_of(b, "A.?requirement2"));
}

TEST_CASE("constraint count formula on random models") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::string src = "model M {\n";
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int b = 0; b < n; ++b) {
      src += "block B" + std::to_string(b);
      bool first = true;
      for (int a = 0; a < b; ++a)
        if (rng() % 3 == 0) {
          src += (first ? " implements B" : ", B") + std::to_string(a);
          first = false;
        }
      src += " {";
      for (int p = 0; p < 3; ++p)
        if (rng() % 2) src += " prop p" + std::to_string(p) + " = " + std::to_string(b);
      if (rng() % 2) src += " require true";
      if (rng() % 2) src += " kpi 1";
      if (rng() % 3 == 0) src += " block K" + std::to_string(b) + " { prop q = 1 }";
      src += " }\n";
    }
    src += "}";
    const Model m = parse_model(src);
    const ConstraintSystem cs = lower(m);
    CHECK_MESSAGE(cs.constraints.size() == expected_constraint_count(m), src);
    // Every lhs is unique and every reference on a rhs has a defining constraint.
    for (const Constraint& c : cs.constraints) {
      CHECK(cs.find(c.lhs) == &c);
      for (const auto& use : extract_references(c.rhs)) CHECK(cs.find(use.node->ref) != nullptr);
    }
  }
}

TEST_CASE("aggregation expansion agrees with a direct fold over children") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int kids = static_cast<int>(rng() % 6);
    std::vector<std::optional<double>> values;
    std::vector<std::optional<bool>> flags;
    std::string src = "model M { block P { prop s = SUM(v) prop p = PRODUCT(v) prop lo = MIN(v) prop hi = MAX(v) "
                      "prop all = AND(f) prop any = OR(f)\n";
    for (int k = 0; k < kids; ++k) {
      src += " block C" + std::to_string(k) + " {";
      values.emplace_back();
      flags.emplace_back();
      if (rng() % 4) {
        values.back() = static_cast<double>(static_cast<int>(rng() % 21) - 10);
        src += " prop v = " + std::to_string(static_cast<int>(*values.back()));
      }
      if (rng() % 4) {
        flags.back() = rng() % 2 == 0;
        src += std::string(" prop f = ") + (*flags.back() ? "true" : "false");
      }
      src += " }";
    }
    src += " } }";
    const ConstraintSystem cs = lower(parse_model(src));

    EvalContext ctx;
    ctx.lookup = [&](const RefKey& k) -> Value {
      const Constraint* c = cs.find(k.ref);
      REQUIRE(c);
      return evaluate(c->rhs, ctx);
    };
    double sum = 0, prod = 1, lo = kInf, hi = -kInf;
    bool all = true, any = false;
    for (const auto& v : values)
      if (v) {
        sum += *v;
        prod *= *v;
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
      }
    for (const auto& f : flags)
      if (f) {
        all = all && *f;
        any = any || *f;
      }
    auto num = [&](const char* id) { return evaluate(cs.find(id)->rhs, ctx); };
    CHECK(num("P.s") == Value::number(sum));
    CHECK(num("P.p") == Value::number(prod));
    CHECK(num("P.lo") == Value::number(lo));
    CHECK(num("P.hi") == Value::number(hi));
    CHECK(num("P.all") == Value::boolean(all));
    CHECK(num("P.any") == Value::boolean(any));
  }
}

TEST_CASE("listing round trip") {
  const ConstraintSystem cs = lower(fuse());
  const std::string text = emit_listing(cs);
  const auto report = golden::compare(cs, text);
  CHECK_MESSAGE(report.ok(), report.summary());
  CHECK(text.find("Fuse.?replacement(T) = index_of_max(if BlFuse.?availability(T) then Fuse.?kpi1(BlFuse,T) else "
                  "-inf, if EFuse.?availability(T) then Fuse.?kpi1(EFuse,T) else -inf)") != std::string::npos);
}

TEST_CASE("the listing comparison detects edits") {
  const ConstraintSystem cs = lower(fuse());
  const std::string text = golden::read_file(kRoot + "/tests/data/fuse_constraints.txt");
  auto edited = [&](const std::string& from, const std::string& to) {
    std::string t = text;
    t.replace(t.find(from), from.size(), to);
    return golden::compare(cs, t);
  };
  CHECK(!edited("= 50A", "= 51A").ok());
  CHECK(!edited("BlFuse.?replacement(T) = -1\n", "").ok());
  CHECK(!edited("then EFuse.?availability(T)", "then BlFuse.?availability(T)").ok());
  CHECK(edited("Jan2022 + [months(12) .. months(36)]", "[Jan2023..Jan2025]").ok());
}
