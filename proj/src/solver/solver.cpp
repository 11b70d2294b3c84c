#include "roadmap/solver/solver.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <unordered_map>

#include "roadmap/expr/eval.hpp"
#include "roadmap/expr/printer.hpp"
#include "roadmap/solver/rewrite.hpp"

namespace roadmap {

void TraceSet::insert(std::size_t i) {
  if (i / 64 >= bits_.size()) bits_.resize(i / 64 + 1, 0);
  bits_[i / 64] |= std::uint64_t{1} << (i % 64);
}

bool TraceSet::contains(std::size_t i) const {
  return i / 64 < bits_.size() && (bits_[i / 64] >> (i % 64)) & 1;
}

bool TraceSet::merge(const TraceSet& o) {
  if (o.bits_.size() > bits_.size()) bits_.resize(o.bits_.size(), 0);
  bool grew = false;
  for (std::size_t w = 0; w < o.bits_.size(); ++w) {
    const std::uint64_t before = bits_[w];
    bits_[w] |= o.bits_[w];
    grew |= bits_[w] != before;
  }
  return grew;
}

std::vector<std::size_t> TraceSet::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < bits_.size(); ++w)
    for (std::uint64_t b = bits_[w]; b; b &= b - 1) out.push_back(w * 64 + std::countr_zero(b));
  return out;
}

std::size_t TraceSet::size() const {
  std::size_t n = 0;
  for (std::uint64_t w : bits_) n += std::popcount(w);
  return n;
}

Value narrow_relation(const Value& x, BinaryOp op, const Value& y) {
  if (x.is_tainted() || y.is_tainted()) return Value::tainted(x.type());
  const Interval yr = y.range();
  switch (op) {
    case BinaryOp::Ge:
    case BinaryOp::Gt:
      return intersect(x, x.with_range(Interval{yr.lo, kInf, false}));
    case BinaryOp::Le:
    case BinaryOp::Lt:
      return intersect(x, x.with_range(Interval{-kInf, yr.hi, false}));
    case BinaryOp::Eq:
      return intersect(x, x.with_range(yr));
    default:
      return x;
  }
}

std::optional<std::size_t> constraint_index(const ConstraintSystem& cs, const Reference& ref) {
  const Constraint* c = cs.find(ref);
  if (!c) return std::nullopt;
  return static_cast<std::size_t>(c - cs.constraints.data());
}

std::vector<std::string> trace_elements(const ConstraintSystem& cs, const TraceSet& t) {
  std::set<std::string> ids;
  for (std::size_t i : t.indices())
    if (i < cs.constraints.size())
      for (const auto& o : cs.constraints[i].origins) ids.insert(o);
  return {ids.begin(), ids.end()};
}

namespace {

struct Slot {
  std::size_t ci;
  long long month;
  ExprPtr rhs;
  ExprType type;
  Value bound;
  /// Constraints behind the current bound.
  TraceSet trace;
  /// Constraints whose values were folded into the current rhs.
  TraceSet rhs_trace;
};

std::optional<long long> point_month(const ExprPtr& time) {
  if (time->kind != ExprKind::Literal || !time->value.is_date()) return std::nullopt;
  const Interval r = time->value.range();
  if (!r.is_point()) return std::nullopt;
  return static_cast<long long>(r.lo);
}

class Solver {
public:
  Solver(const ConstraintSystem& cs, long long month, const SolveOptions& opts)
      : cs_(cs), month_(month), opts_(opts) {
    for (std::size_t i = 0; i < cs.constraints.size(); ++i) add_slot(i, month);
  }

  SolveResult run() {
    SolveResult res;
    res.time = month_;
    for (int round = 1; round <= opts_.max_rounds; ++round) {
      res.rounds = round;
      changes_.clear();
      new_instance_ = false;
      bool changed = false;
      for (std::size_t s = 0; s < slots_.size(); ++s) changed |= step(s);
      if (opts_.on_round) {
        std::vector<Value> bounds = main_bounds();
        opts_.on_round(RoundReport{round, changes_, &bounds});
      }
      if (!changed && !new_instance_) {
        res.converged = true;
        break;
      }
    }
    for (std::size_t i = 0; i < cs_.constraints.size(); ++i) {
      const Slot& s = slots_[i];
      res.values.push_back(s.bound);
      res.traces.push_back(s.trace);
      res.rhs.push_back(s.rhs);
    }
    return res;
  }

private:
  std::size_t add_slot(std::size_t ci, long long month) {
    const Constraint& c = cs_.constraints[ci];
    const ExprType type = cs_.type_of(c.lhs).value_or(ExprType::boolean());
    Slot s{ci, month, substitute_time(c.rhs, month), type, Value::top(type), TraceSet(cs_.constraints.size()),
           TraceSet(cs_.constraints.size())};
    s.trace.insert(ci);
    s.rhs_trace.insert(ci);
    slots_.push_back(std::move(s));
    index_.emplace(RefKey{c.lhs, month}, slots_.size() - 1);
    return slots_.size() - 1;
  }

  std::optional<std::size_t> find_slot(const RefKey& k, bool create) {
    auto it = index_.find(k);
    if (it != index_.end()) return it->second;
    if (!create || instances_ >= opts_.max_instances) return std::nullopt;
    auto ci = constraint_index(cs_, k.ref);
    if (!ci) return std::nullopt;
    ++instances_;
    new_instance_ = true;
    return add_slot(*ci, k.month);
  }

  Value top_of(const Reference& r) const { return Value::top(cs_.type_of(r).value_or(ExprType::boolean())); }

  bool informative(std::size_t s) const { return !(slots_[s].bound == Value::top(slots_[s].type)); }

  EvalContext context(long long month, std::vector<RefKey>* reads) {
    EvalContext ctx;
    ctx.time = month;
    ctx.reads = reads;
    ctx.lookup = [this](const RefKey& k) {
      if (auto s = find_slot(k, true)) return slots_[*s].bound;
      return top_of(k.ref);
    };
    return ctx;
  }

  std::string lhs_text(const Slot& s) const {
    return to_source(ast::ref(cs_.constraints[s.ci].lhs, ast::literal(Value::date(static_cast<double>(s.month)))));
  }

  std::vector<Value> main_bounds() const {
    std::vector<Value> out;
    for (std::size_t i = 0; i < cs_.constraints.size(); ++i) out.push_back(slots_[i].bound);
    return out;
  }

  bool step(std::size_t si) {
    bool changed = false;
    if (opts_.rewrite) changed |= rewrite(si);

    std::vector<RefKey> reads;
    std::optional<Value> v;
    try {
      v = evaluate(slots_[si].rhs, context(slots_[si].month, &reads));
    } catch (const std::exception&) {
    }
    // Constraints behind the rhs as evaluated now.
    TraceSet contrib = slots_[si].rhs_trace;
    for (const RefKey& k : reads)
      if (auto s = find_slot(k, false); s && informative(*s)) contrib.merge(slots_[*s].trace);

    if (v) {
      try {
        Value nb = intersect(slots_[si].bound, *v);
        if (!(nb == slots_[si].bound)) {
          slots_[si].bound = nb;
          slots_[si].trace.merge(contrib);
          changes_.push_back(lhs_text(slots_[si]) + " = " + literal_source(nb));
          changed = true;
        }
      } catch (const std::exception&) {
      }
    }

    const Value target = slots_[si].bound;
    if (!target.is_tainted() && informative(si)) {
      contrib.merge(slots_[si].trace);
      ctx_ = context(slots_[si].month, nullptr);
      changed |= backward(slots_[si].rhs, target, contrib);
    }
    return changed;
  }

  bool rewrite(std::size_t si) {
    TraceSet used(cs_.constraints.size());
    RewriteContext rc;
    rc.types = [this](const Expr& n) -> std::optional<ExprType> {
      if (n.kind == ExprKind::Ref) return cs_.type_of(n.ref);
      return std::nullopt;
    };
    rc.known = [this](const Expr& n) -> std::optional<Value> {
      auto m = point_month(n.time_arg());
      if (!m) return std::nullopt;
      auto s = find_slot(RefKey{n.ref, *m}, false);
      if (!s || !slots_[*s].bound.is_definite()) return std::nullopt;
      return slots_[*s].bound;
    };
    rc.used = [this, &used](const Expr& n) {
      if (auto m = point_month(n.time_arg()))
        if (auto s = find_slot(RefKey{n.ref, *m}, false)) used.merge(slots_[*s].trace);
    };
    ExprPtr next = rewrite_once(slots_[si].rhs, rc);
    if (structurally_equal(next, slots_[si].rhs)) return false;
    if (expr_size(next) > opts_.max_expr_size) return false;
    slots_[si].rhs = std::move(next);
    slots_[si].rhs_trace.merge(used);
    changes_.push_back(lhs_text(slots_[si]) + " = " + to_source(slots_[si].rhs));
    return true;
  }

  std::optional<Value> eval_sub(const ExprPtr& e) {
    try {
      return evaluate(e, ctx_);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  // Narrows `e` under the assertion that its value lies in `target`.
  bool backward(const ExprPtr& e, const Value& target, const TraceSet& contrib) {
    try {
      return backward_impl(e, target, contrib);
    } catch (const std::exception&) {
      return false;
    }
  }

  // Recurses into `e` with the narrowed target, if it says anything new.
  bool descend(const ExprPtr& e, const Value& narrowed, const TraceSet& contrib) {
    auto cur = eval_sub(e);
    if (!cur) return false;
    Value t = intersect(*cur, narrowed);
    if (t == *cur) return false;
    return backward(e, t, contrib);
  }

  bool backward_impl(const ExprPtr& e, const Value& target, const TraceSet& contrib) {
    switch (e->kind) {
      case ExprKind::Ref: {
        auto m = point_month(e->time_arg());
        if (!m) return false;
        auto s = find_slot(RefKey{e->ref, *m}, false);
        if (!s) return false;
        Value nb = intersect(slots_[*s].bound, target);
        if (nb == slots_[*s].bound) return false;
        slots_[*s].bound = nb;
        slots_[*s].trace.merge(contrib);
        changes_.push_back(lhs_text(slots_[*s]) + " = " + literal_source(nb));
        return true;
      }
      case ExprKind::UnitCast:
        return descend(e->args[0], target, contrib);
      case ExprKind::Unary:
        if (e->uop == UnaryOp::Neg) return descend(e->args[0], apply_unary(UnaryOp::Neg, target), contrib);
        if (target.is_definite()) return descend(e->args[0], apply_unary(UnaryOp::Not, target), contrib);
        return false;
      case ExprKind::Cond: {
        auto c = eval_sub(e->args[0]);
        if (!c || !c->is_definite()) return false;
        return descend(e->args[c->as_bool().value == Ternary::True ? 1 : 2], target, contrib);
      }
      case ExprKind::Binary:
        return backward_binary(e, target, contrib);
      default:
        return false;
    }
  }

  bool backward_binary(const ExprPtr& e, const Value& target, const TraceSet& contrib) {
    const ExprPtr& a = e->args[0];
    const ExprPtr& b = e->args[1];
    const BinaryOp op = e->bop;
    if (op == BinaryOp::And || op == BinaryOp::Or) {
      if (!target.is_definite()) return false;
      const Ternary t = target.as_bool().value;
      if ((op == BinaryOp::And) != (t == Ternary::True)) return false;
      bool changed = descend(a, target, contrib);
      changed |= descend(b, target, contrib);
      return changed;
    }
    auto va = eval_sub(a);
    auto vb = eval_sub(b);
    if (!va || !vb) return false;
    if (is_relational(op)) {
      if (!target.is_definite()) return false;
      const BinaryOp rel = target.as_bool().value == Ternary::True ? op : negate_relation(op);
      bool changed = descend(a, narrow_relation(*va, rel, *vb), contrib);
      changed |= descend(b, narrow_relation(*vb, flip_relation(rel), *va), contrib);
      return changed;
    }
    auto zero_free = [](const Value& v) { return !v.range().contains(0.0); };
    bool changed = false;
    auto try_descend = [&](const ExprPtr& x, auto&& compute) {
      try {
        changed |= descend(x, compute(), contrib);
      } catch (const std::exception&) {
      }
    };
    switch (op) {
      case BinaryOp::Add:
        try_descend(a, [&] { return arith(BinaryOp::Sub, target, *vb); });
        try_descend(b, [&] { return arith(BinaryOp::Sub, target, *va); });
        break;
      case BinaryOp::Sub:
        try_descend(a, [&] { return arith(BinaryOp::Add, target, *vb); });
        try_descend(b, [&] { return arith(BinaryOp::Sub, *va, target); });
        break;
      case BinaryOp::Mul:
        if (zero_free(*vb)) try_descend(a, [&] { return arith(BinaryOp::Div, target, *vb); });
        if (zero_free(*va)) try_descend(b, [&] { return arith(BinaryOp::Div, target, *va); });
        break;
      case BinaryOp::Div:
        if (zero_free(*vb)) {
          try_descend(a, [&] { return arith(BinaryOp::Mul, target, *vb); });
          if (zero_free(target)) try_descend(b, [&] { return arith(BinaryOp::Div, *va, target); });
        }
        break;
      default:
        break;
    }
    return changed;
  }

  const ConstraintSystem& cs_;
  long long month_;
  SolveOptions opts_;
  std::vector<Slot> slots_;
  std::unordered_map<RefKey, std::size_t, RefKeyHash> index_;
  std::size_t instances_ = 0;
  bool new_instance_ = false;
  std::vector<std::string> changes_;
  EvalContext ctx_;
};

}  // namespace

SolveResult solve(const ConstraintSystem& cs, long long month, const SolveOptions& opts) {
  return Solver(cs, month, opts).run();
}

}  // namespace roadmap
