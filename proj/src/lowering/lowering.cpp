#include "roadmap/lowering/lowering.hpp"

#include <algorithm>
#include <set>

#include "roadmap/expr/eval.hpp"
#include "roadmap/expr/parser.hpp"
#include "roadmap/expr/typecheck.hpp"
#include "roadmap/model/relations.hpp"

namespace roadmap {

namespace {

Reference labelled(const Model& m, Reference r) {
  if (auto b = m.find(r.block)) r.block_label = m.block(*b).label;
  if (!r.impl.empty())
    if (auto i = m.find(r.impl)) r.impl_label = m.block(*i).label;
  return r;
}

Reference prop_ref(const Model& m, BlockIndex b, const std::string& name) {
  return labelled(m, Reference::property(m.block(b).id, name));
}
Reference req_ref(const Model& m, BlockIndex b, int n) { return labelled(m, Reference::requirement(m.block(b).id, n)); }
Reference kpi_ref(const Model& m, BlockIndex b, int n, BlockIndex alt) {
  return labelled(m, Reference::kpi(m.block(b).id, n, m.block(alt).id));
}
Reference avail_ref(const Model& m, BlockIndex b) { return labelled(m, Reference::availability(m.block(b).id)); }
Reference repl_ref(const Model& m, BlockIndex b) { return labelled(m, Reference::replacement(m.block(b).id)); }

ExprPtr at_t(const Reference& r) { return ast::ref(r, ast::time()); }

bool has_prop(const Model& m, BlockIndex b, const std::string& name) {
  for (const auto& em : allprops(m, b))
    if (em.name == name) return true;
  return false;
}

std::optional<BlockIndex> child_named(const Model& m, BlockIndex parent, const std::string& name) {
  for (BlockIndex c : m.children_of(parent))
    if (m.block(c).name == name) return c;
  return std::nullopt;
}

// Resolves the remainder of a path once its first segment matched `start`.
std::optional<Reference> walk(const Model& m, BlockIndex start, const std::vector<std::string>& path) {
  BlockIndex cur = start;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const bool last = i + 1 == path.size();
    if (last && has_prop(m, cur, path[i])) return prop_ref(m, cur, path[i]);
    auto next = child_named(m, cur, path[i]);
    if (!next) return std::nullopt;
    cur = *next;
  }
  return avail_ref(m, cur);
}

// True if the first segment of `path` is a name defined directly in `b`.
bool local_to(const Model& m, BlockIndex b, const std::vector<std::string>& path) {
  if (path.size() == 1 && has_prop(m, b, path[0])) return true;
  return child_named(m, b, path[0]).has_value();
}

void collect_idents(const ExprPtr& e, std::vector<const Expr*>& out) {
  if (e->kind == ExprKind::Ident) out.push_back(e.get());
  if (e->kind == ExprKind::Aggregate) return;  // nested bodies range over grandchildren
  for (const auto& a : e->args) collect_idents(a, out);
}

class Resolver {
public:
  Resolver(const Model& m, std::vector<Diagnostic>& diags, std::vector<ResolvedUse>* uses)
      : m_(m), diags_(diags), uses_(uses) {}

  ExprPtr run(BlockIndex scope, const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::Ident: {
        ExprPtr time = run(scope, e->time_arg());
        auto r = resolve_path(m_, scope, e->path);
        if (!r) {
          std::string name;
          for (const auto& s : e->path) name += (name.empty() ? "" : ".") + s;
          diags_.push_back({"unresolved identifier '" + name + "' in " + m_.block(scope).id, e->span});
          return ast::literal(Value::boolean(Ternary::Maybe), e->span);
        }
        if (uses_) uses_->push_back({e->span, *r});
        return ast::ref(*r, time, e->span);
      }
      case ExprKind::Aggregate:
        return expand(scope, *e);
      default: {
        if (e->args.empty()) return e;
        std::vector<ExprPtr> args;
        args.reserve(e->args.size());
        for (const auto& a : e->args) args.push_back(run(scope, a));
        return ast::with_args(*e, std::move(args));
      }
    }
  }

private:
  // Aggregations range over the direct children that define at least one
  // of the body's names locally; the body is resolved in each child.
  ExprPtr expand(BlockIndex scope, const Expr& agg) {
    std::vector<const Expr*> idents;
    collect_idents(agg.args[0], idents);
    std::vector<ExprPtr> items;
    for (BlockIndex c : m_.children_of(scope)) {
      const bool applies = std::any_of(idents.begin(), idents.end(),
                                       [&](const Expr* id) { return local_to(m_, c, id->path); });
      if (applies) items.push_back(run(c, agg.args[0]));
    }
    const std::string& n = agg.name;
    if (n == "SUM") return ast::chain(BinaryOp::Add, items, ast::literal(Value::number(0)));
    if (n == "PRODUCT") return ast::chain(BinaryOp::Mul, items, ast::literal(Value::number(1)));
    if (n == "AND") return ast::chain(BinaryOp::And, items, ast::literal(Value::boolean(true)));
    if (n == "OR") return ast::chain(BinaryOp::Or, items, ast::literal(Value::boolean(false)));
    const std::string fn = n == "MIN" ? "min" : n == "MAX" ? "max" : "union";
    if (items.size() == 1) return items.front();
    if (items.empty()) {
      if (n == "MIN") return ast::literal(Value::number(kInf));
      if (n == "MAX") return ast::literal(Value::number(-kInf));
      return ast::literal(Value::tainted(ExprType::number()));
    }
    return ast::call(fn, std::move(items));
  }

  const Model& m_;
  std::vector<Diagnostic>& diags_;
  std::vector<ResolvedUse>* uses_;
};

struct PendingType {};

ExprType infer(const ExprPtr& e, const std::unordered_map<Reference, ExprType, ReferenceHash>& types) {
  return typecheck(e, [&](const Expr& node) -> std::optional<ExprType> {
    if (node.kind != ExprKind::Ref) return std::nullopt;
    switch (node.ref.kind) {
      case RefKind::Requirement:
      case RefKind::Availability: return ExprType::boolean();
      case RefKind::Replacement: return ExprType::number();
      default: break;
    }
    auto it = types.find(node.ref);
    if (it == types.end()) throw PendingType{};
    return it->second;
  });
}

ExprPtr typed_unknown(const ExprType& t) { return ast::literal(Value::top(t)); }

// `if R(T) = 1 then a_1 else if R(T) = 2 then a_2 ... else fallback`
ExprPtr replacement_chain(const Reference& repl, const std::vector<ExprPtr>& alts, ExprPtr fallback) {
  ExprPtr acc = std::move(fallback);
  for (std::size_t i = alts.size(); i-- > 0;) {
    ExprPtr test = ast::binary(BinaryOp::Eq, at_t(repl), ast::literal(Value::number(static_cast<double>(i + 1))));
    acc = ast::cond(test, alts[i], acc);
  }
  return acc;
}

std::string type_name(const ExprType& t) { return t.to_string(); }

}  // namespace

const Constraint* ConstraintSystem::find(const Reference& lhs) const {
  auto it = by_lhs_.find(lhs);
  return it == by_lhs_.end() ? nullptr : &constraints[it->second];
}

const Constraint* ConstraintSystem::find(const std::string& id_or_label) const {
  auto it = by_name_.find(id_or_label);
  return it == by_name_.end() ? nullptr : &constraints[it->second];
}

std::optional<ExprType> ConstraintSystem::type_of(const Reference& r) const {
  auto it = types.find(r);
  if (it == types.end()) return std::nullopt;
  return it->second;
}

void ConstraintSystem::reindex() {
  by_lhs_.clear();
  by_name_.clear();
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    by_lhs_[constraints[i].lhs] = i;
    by_name_.emplace(constraints[i].lhs.label(), i);
  }
  // Ids win over labels when both spellings collide.
  for (std::size_t i = 0; i < constraints.size(); ++i) by_name_[constraints[i].lhs.id()] = i;
}

std::optional<Reference> resolve_path(const Model& m, BlockIndex scope, const std::vector<std::string>& path) {
  if (path.empty()) return std::nullopt;
  for (BlockIndex s = scope;; s = m.block(s).parent) {
    if (s != kNoBlock && path.size() == 1 && has_prop(m, s, path[0])) return prop_ref(m, s, path[0]);
    if (auto c = child_named(m, s, path[0])) return walk(m, *c, path);
    if (s == kNoBlock) return std::nullopt;
  }
}

ExprPtr resolve_expression(const Model& m, BlockIndex scope, const ExprPtr& e, std::vector<ResolvedUse>* uses) {
  std::vector<Diagnostic> diags;
  ExprPtr out = Resolver(m, diags, uses).run(scope, e);
  if (!diags.empty()) throw ModelError(std::move(diags));
  return out;
}

std::size_t expected_constraint_count(const Model& m) {
  std::size_t n = 0;
  for (BlockIndex b = 0; b < m.blocks.size(); ++b)
    n += allprops(m, b).size() + allreqs(m, b).size() + m.block(b).kpis.size() * allimpls(m, b).size() + 2;
  return n;
}

ConstraintSystem lower(const Model& m) {
  std::vector<Diagnostic> diags;
  ConstraintSystem cs;
  auto& types = cs.types;

  // Pass 1: resolve every member expression in its block's scope.
  struct Item {
    BlockIndex block;
    ExpandedMember member;
    int ordinal = 0;  // requirement / kpi number
    std::vector<std::pair<BlockIndex, ExprPtr>> resolved;  // (scope, expr); one per alternative for KPIs
    std::vector<ResolvedUse> uses;
  };
  std::vector<std::vector<Item>> per_block(m.blocks.size());
  for (BlockIndex b = 0; b < m.blocks.size(); ++b) {
    int req_n = 0, kpi_n = 0;
    const auto alts = allimpls(m, b);
    for (ExpandedMember& em : expanded_members(m, b)) {
      Item it{b, em, 0, {}, {}};
      if (em.kind == MemberKind::Requirement) it.ordinal = ++req_n;
      if (em.kind == MemberKind::Kpi) it.ordinal = ++kpi_n;
      if (em.expr) {
        if (em.kind == MemberKind::Kpi) {
          for (BlockIndex alt : alts) it.resolved.emplace_back(alt, Resolver(m, diags, nullptr).run(alt, em.expr));
          Resolver(m, diags, &it.uses).run(alts.empty() ? b : alts.front(), em.expr);
        } else {
          it.resolved.emplace_back(b, Resolver(m, diags, &it.uses).run(b, em.expr));
        }
      }
      per_block[b].push_back(std::move(it));
    }
  }
  if (!diags.empty()) throw ModelError(std::move(diags));

  // Pass 2: property types, declared first, then inferred to a fixpoint.
  std::vector<const Item*> pending;
  for (const auto& items : per_block)
    for (const Item& it : items) {
      if (it.member.kind != MemberKind::Property) continue;
      const Reference r = prop_ref(m, it.block, it.member.name);
      if (it.member.declared) types[r] = *it.member.declared;
      else pending.push_back(&it);
    }
  for (bool progress = true; progress && !pending.empty();) {
    progress = false;
    for (auto it = pending.begin(); it != pending.end();) {
      const Item& item = **it;
      try {
        types[prop_ref(m, item.block, item.member.name)] = infer(item.resolved.front().second, types);
        it = pending.erase(it);
        progress = true;
      } catch (const PendingType&) {
        ++it;
      } catch (const TypeError& e) {
        diags.push_back({std::string(e.what()) + " in " + prop_ref(m, item.block, item.member.name).id(),
                         e.spans().empty() ? item.member.span : e.spans().front()});
        it = pending.erase(it);
      }
    }
  }
  for (const Item* item : pending)
    diags.push_back({"cannot infer the type of " + prop_ref(m, item->block, item->member.name).id() +
                         " (circular definition; declare its type)",
                     item->member.span});
  if (!diags.empty()) throw ModelError(std::move(diags));

  // KPI types, per alternative.
  for (const auto& items : per_block)
    for (const Item& it : items) {
      if (it.member.kind != MemberKind::Kpi) continue;
      for (const auto& [alt, expr] : it.resolved) {
        try {
          types[kpi_ref(m, it.block, it.ordinal, alt)] = infer(expr, types);
        } catch (const TypeError& e) {
          diags.push_back({e.what(), e.spans().empty() ? it.member.span : e.spans().front()});
        }
      }
    }
  for (BlockIndex b = 0; b < m.blocks.size(); ++b) {
    types[avail_ref(m, b)] = ExprType::boolean();
    types[repl_ref(m, b)] = ExprType::number();
    for (std::size_t k = 1; k <= allreqs(m, b).size(); ++k) types[req_ref(m, b, static_cast<int>(k))] = ExprType::boolean();
  }

  // Pass 3: constraints in block order, members in expanded order.
  for (BlockIndex b = 0; b < m.blocks.size(); ++b) {
    const Block& blk = m.block(b);
    const auto alts = allimpls(m, b);
    const Reference repl = repl_ref(m, b);
    std::vector<ExprPtr> req_refs;

    for (const Item& it : per_block[b]) {
      const ExpandedMember& em = it.member;
      std::vector<std::string> origins;
      auto add = [&](Reference lhs, ExprPtr rhs) {
        Constraint c;
        c.origins = {lhs.id()};
        if (em.origin_id != lhs.id()) c.origins.push_back(em.origin_id);
        c.lhs = std::move(lhs);
        c.rhs = std::move(rhs);
        c.block = b;
        c.source_span = em.span;
        c.inherited = em.inherited;
        c.uses = it.uses;
        cs.constraints.push_back(std::move(c));
      };
      switch (em.kind) {
        case MemberKind::Property: {
          const Reference lhs = prop_ref(m, b, em.name);
          ExprPtr fallback = it.resolved.empty() ? typed_unknown(types.at(lhs)) : it.resolved.front().second;
          std::vector<ExprPtr> alt_refs;
          for (BlockIndex a : alts) alt_refs.push_back(at_t(prop_ref(m, a, em.name)));
          add(lhs, replacement_chain(repl, alt_refs, fallback));
          break;
        }
        case MemberKind::Requirement: {
          const Reference lhs = req_ref(m, b, it.ordinal);
          req_refs.push_back(at_t(lhs));
          add(lhs, it.resolved.front().second);
          break;
        }
        case MemberKind::Kpi:
          for (const auto& [alt, expr] : it.resolved) add(kpi_ref(m, b, it.ordinal, alt), expr);
          break;
      }
    }

    // Availability: requirements, then the selected alternative, then children.
    std::vector<ExprPtr> parts = req_refs;
    if (!alts.empty()) {
      std::vector<ExprPtr> alt_avail;
      for (BlockIndex a : alts) alt_avail.push_back(at_t(avail_ref(m, a)));
      parts.push_back(replacement_chain(repl, alt_avail, ast::literal(Value::boolean(true))));
    }
    for (BlockIndex c : blk.children) parts.push_back(at_t(avail_ref(m, c)));
    Constraint avail;
    avail.lhs = avail_ref(m, b);
    avail.rhs = ast::chain(BinaryOp::And, parts, ast::literal(Value::boolean(true)));
    avail.block = b;
    avail.origins = {blk.id};
    cs.constraints.push_back(std::move(avail));

    // Replacement: best available alternative by summed KPIs.
    Constraint rc;
    rc.lhs = repl;
    rc.block = b;
    rc.origins = {blk.id};
    if (alts.empty()) {
      rc.rhs = ast::literal(Value::number(-1));
    } else {
      std::vector<ExprPtr> guarded;
      for (BlockIndex a : alts) {
        std::vector<ExprPtr> kpis;
        for (std::size_t k = 1; k <= blk.kpis.size(); ++k) kpis.push_back(at_t(kpi_ref(m, b, static_cast<int>(k), a)));
        ExprPtr sum = ast::chain(BinaryOp::Add, kpis, ast::literal(Value::number(0)));
        Unit unit;
        if (!kpis.empty())
          if (auto t = cs.type_of(kpi_ref(m, b, 1, a)); t && t->kind == TypeKind::Number) unit = t->unit;
        guarded.push_back(ast::cond(at_t(avail_ref(m, a)), sum, ast::literal(Value::number(-kInf, unit))));
      }
      rc.rhs = ast::call("index_of_max", std::move(guarded));
    }
    cs.constraints.push_back(std::move(rc));
  }

  // Pass 4: every equation must be well typed.
  for (const Constraint& c : cs.constraints) {
    const ExprType want = types.at(c.lhs);
    try {
      const ExprType got = infer(c.rhs, types);
      if (!(got == want))
        diags.push_back({c.lhs.id() + " has type " + type_name(want) + " but its definition has type " + type_name(got),
                         c.source_span});
    } catch (const TypeError& e) {
      diags.push_back({std::string(e.what()) + " in " + c.lhs.id(),
                       e.spans().empty() ? c.source_span : e.spans().front()});
    } catch (const PendingType&) {
      diags.push_back({"untyped reference in " + c.lhs.id(), c.source_span});
    }
  }
  if (!diags.empty()) throw ModelError(std::move(diags));

  cs.reindex();
  return cs;
}

std::string constraint_source(const Constraint& c, const PrintOptions& opts) {
  Reference lhs = c.lhs;
  return to_source(ast::ref(lhs, ast::time()), opts) + " = " + to_source(c.rhs, opts);
}

std::string emit_listing(const ConstraintSystem& cs, const PrintOptions& opts) {
  std::string out;
  for (const Constraint& c : cs.constraints) out += constraint_source(c, opts) + "\n";
  return out;
}

std::vector<ListingEntry> parse_listing(std::string_view text) {
  const auto toks = tokenize(text, true);
  std::vector<ListingEntry> out;
  std::size_t pos = 0;
  while (toks[pos].kind != Tok::End) {
    // `=` binds tighter than `&`, so the lhs is split off at the first
    // top-level `=` before the rhs is parsed.
    std::size_t eq = pos;
    for (int depth = 0; toks[eq].kind != Tok::End; ++eq) {
      if (toks[eq].kind != Tok::Punct) continue;
      if (toks[eq].text == "(") ++depth;
      else if (toks[eq].text == ")") --depth;
      else if (toks[eq].text == "=" && depth == 0) break;
    }
    if (toks[eq].kind == Tok::End) throw ParseError("expected 'reference = expression'", toks[pos].span, {"="});
    std::vector<Token> lhs_toks(toks.begin() + static_cast<std::ptrdiff_t>(pos), toks.begin() + static_cast<std::ptrdiff_t>(eq));
    lhs_toks.push_back(Token{Tok::End, "", "", toks[eq].span});
    ExprParser lp(lhs_toks, 0, ParseOptions{true});
    ExprPtr lhs = lp.parse_expression();
    if (lhs->kind != ExprKind::Ref || lp.position() != lhs_toks.size() - 1)
      throw ParseError("expected a reference before '='", lhs->span);
    ExprParser rp(toks, eq + 1, ParseOptions{true});
    out.push_back({lhs->ref, rp.parse_expression()});
    pos = rp.position();
  }
  return out;
}

ExprPtr normalize_for_comparison(const ExprPtr& e) {
  if (e->kind != ExprKind::Literal && !mentions_time_or_refs(e))
    if (auto v = constant_value(e)) return ast::literal(*v);
  if (e->kind == ExprKind::Ref) {
    Reference r = e->ref;
    r.block = r.block_label;
    r.impl = r.impl_label;
    return ast::ref(r, normalize_for_comparison(e->time_arg()));
  }
  if (e->args.empty()) return e;
  std::vector<ExprPtr> args;
  for (const auto& a : e->args) args.push_back(normalize_for_comparison(a));
  return ast::with_args(*e, std::move(args));
}

}  // namespace roadmap
