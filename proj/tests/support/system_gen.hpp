#pragma once

// Random numeric constraint systems written as model text, plus an
// exhaustive integer search for their solutions. The search evaluates the
// equations with plain doubles and shares no code with the solver.

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace sysgen {

struct Node {
  enum Op { Var, Const, Add, Sub, Mul, Min, Max, Neg, Half, CondLt } op = Const;
  int var = 0;
  double c = 0;
  std::vector<std::shared_ptr<Node>> kids;
};
using NodePtr = std::shared_ptr<Node>;

inline std::string num_text(double v) {
  std::string s = std::to_string(static_cast<long long>(v));
  return v < 0 ? "(" + s + ")" : s;
}

inline std::string text(const NodePtr& n) {
  auto k = [&](int i) { return text(n->kids[static_cast<std::size_t>(i)]); };
  switch (n->op) {
    case Node::Var: return "x" + std::to_string(n->var);
    case Node::Const: return num_text(n->c);
    case Node::Add: return "(" + k(0) + " + " + k(1) + ")";
    case Node::Sub: return "(" + k(0) + " - " + k(1) + ")";
    case Node::Mul: return "(" + k(0) + " * " + k(1) + ")";
    case Node::Min: return "min(" + k(0) + ", " + k(1) + ")";
    case Node::Max: return "max(" + k(0) + ", " + k(1) + ")";
    case Node::Neg: return "(-" + k(0) + ")";
    case Node::Half: return "(" + k(0) + " / 2)";
    case Node::CondLt: return "(if " + k(0) + " < " + k(1) + " then " + k(2) + " else " + k(3) + ")";
  }
  return "";
}

inline double eval(const NodePtr& n, const std::vector<double>& x) {
  auto k = [&](int i) { return eval(n->kids[static_cast<std::size_t>(i)], x); };
  switch (n->op) {
    case Node::Var: return x[static_cast<std::size_t>(n->var)];
    case Node::Const: return n->c;
    case Node::Add: return k(0) + k(1);
    case Node::Sub: return k(0) - k(1);
    case Node::Mul: return k(0) * k(1);
    case Node::Min: return std::min(k(0), k(1));
    case Node::Max: return std::max(k(0), k(1));
    case Node::Neg: return -k(0);
    case Node::Half: return k(0) / 2;
    case Node::CondLt: return k(0) < k(1) ? k(2) : k(3);
  }
  return 0;
}

inline int max_var(const NodePtr& n) {
  int m = n->op == Node::Var ? n->var : -1;
  for (const auto& c : n->kids) m = std::max(m, max_var(c));
  return m;
}

/// x_i = f_i(x) + [lo..hi]; `f` may be absent and the interval may be a point.
struct Equation {
  NodePtr f;
  std::optional<std::pair<int, int>> box;
};

struct System {
  std::vector<Equation> eqs;

  std::size_t size() const { return eqs.size(); }

  std::string model_text() const {
    std::string s = "model R {\n  block S {\n";
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      std::string rhs;
      if (eqs[i].f) rhs = text(eqs[i].f);
      if (eqs[i].box) {
        std::string b = "[" + num_text(eqs[i].box->first) + ".." + num_text(eqs[i].box->second) + "]";
        rhs = rhs.empty() ? b : rhs + " + " + b;
      }
      s += "    prop x" + std::to_string(i) + " : num = " + rhs + "\n";
    }
    return s + "  }\n}\n";
  }

  bool holds(std::size_t i, const std::vector<double>& x) const {
    const Equation& e = eqs[i];
    const double f = e.f ? eval(e.f, x) : 0.0;
    const double d = x[i] - f;
    if (e.box) return d >= e.box->first - 1e-9 && d <= e.box->second + 1e-9;
    return std::fabs(d) < 1e-9;
  }

  /// Highest variable index equation `i` depends on, its own included.
  int reach(std::size_t i) const {
    int m = static_cast<int>(i);
    if (eqs[i].f) m = std::max(m, max_var(eqs[i].f));
    return m;
  }
};

class Builder {
public:
  Builder(std::mt19937_64& rng, int n) : rng_(rng), n_(n) {}

  NodePtr make(int depth, int max_ref) {
    if (depth == 0 || pick(4) == 0) return leaf(max_ref);
    auto node = std::make_shared<Node>();
    static const Node::Op ops[] = {Node::Add, Node::Sub, Node::Mul, Node::Min,
                                   Node::Max, Node::Neg, Node::Half, Node::CondLt};
    node->op = ops[pick(8)];
    int arity = 2;
    if (node->op == Node::Neg || node->op == Node::Half) arity = 1;
    if (node->op == Node::CondLt) arity = 4;
    for (int i = 0; i < arity; ++i) node->kids.push_back(make(depth - 1, max_ref));
    return node;
  }

  int pick(int k) { return std::uniform_int_distribution<int>(0, k - 1)(rng_); }

private:
  NodePtr leaf(int max_ref) {
    auto node = std::make_shared<Node>();
    if (max_ref >= 0 && pick(3) != 0) {
      node->op = Node::Var;
      node->var = pick(max_ref + 1);
    } else {
      node->op = Node::Const;
      node->c = pick(11) - 5;
    }
    return node;
  }

  std::mt19937_64& rng_;
  int n_;
};

inline System random_system(std::mt19937_64& rng) {
  const int n = 1 + static_cast<int>(rng() % 5);
  Builder b(rng, n);
  System sys;
  for (int i = 0; i < n; ++i) {
    Equation e;
    // Mostly acyclic, sometimes free to refer to any variable.
    const int max_ref = b.pick(4) == 0 ? n - 1 : i - 1;
    const int shape = b.pick(4);
    if (shape != 0) e.f = b.make(1 + b.pick(3), max_ref);
    if (shape != 1 || !e.f) {
      const int lo = b.pick(21) - 10;
      const int width = b.pick(3) == 0 ? 0 : b.pick(8);
      e.box = {lo, std::min(10, lo + width)};
    }
    sys.eqs.push_back(e);
  }
  return sys;
}

/// Every integer assignment with |x_i| <= bound satisfying all equations.
inline std::vector<std::vector<double>> brute_force(const System& sys, int bound) {
  const std::size_t n = sys.size();
  std::vector<std::vector<std::size_t>> ready(n);
  for (std::size_t i = 0; i < n; ++i) ready[static_cast<std::size_t>(sys.reach(i))].push_back(i);
  std::vector<std::vector<double>> out;
  std::vector<double> x(n, 0.0);
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == n) {
      out.push_back(x);
      return;
    }
    for (int v = -bound; v <= bound; ++v) {
      x[k] = v;
      bool ok = std::all_of(ready[k].begin(), ready[k].end(), [&](std::size_t i) { return sys.holds(i, x); });
      if (ok) self(self, k + 1);
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace sysgen
