#include "roadmap/model/relations.hpp"

#include <algorithm>
#include <set>

namespace roadmap {

std::vector<BlockIndex> impls(const Model& m, BlockIndex a) {
  std::vector<BlockIndex> out;
  for (BlockIndex b = 0; b < m.blocks.size(); ++b) {
    const auto& is = m.blocks[b].implements;
    if (std::find(is.begin(), is.end(), a) != is.end()) out.push_back(b);
  }
  return out;
}

std::vector<BlockIndex> interfaces(const Model& m) {
  std::vector<bool> flag(m.blocks.size(), false);
  for (const Block& b : m.blocks)
    for (BlockIndex i : b.implements) flag[i] = true;
  std::vector<BlockIndex> out;
  for (BlockIndex b = 0; b < flag.size(); ++b)
    if (flag[b]) out.push_back(b);
  return out;
}

std::vector<BlockIndex> allimpls(const Model& m, BlockIndex a) {
  std::set<BlockIndex> found;
  std::vector<BlockIndex> todo{a};
  while (!todo.empty()) {
    const BlockIndex cur = todo.back();
    todo.pop_back();
    for (BlockIndex b : impls(m, cur))
      if (found.insert(b).second) todo.push_back(b);
  }
  return {found.begin(), found.end()};
}

std::vector<ExpandedMember> expanded_members(const Model& m, BlockIndex b) {
  const Block& blk = m.blocks[b];
  std::set<std::string> local_names;
  for (const Property& p : blk.props) local_names.insert(p.name);

  std::vector<ExpandedMember> out;
  std::set<std::string> inherited_names;
  std::set<std::string> inherited_origins;
  for (BlockIndex i : blk.implements) {
    for (ExpandedMember em : expanded_members(m, i)) {
      if (em.kind == MemberKind::Kpi) continue;
      if (em.kind == MemberKind::Property) {
        if (local_names.count(em.name) || !inherited_names.insert(em.name).second) continue;
      } else if (!inherited_origins.insert(em.origin_id).second) {
        continue;
      }
      em.inherited = true;
      out.push_back(std::move(em));
    }
  }

  for (const MemberRef& mr : blk.members) {
    ExpandedMember em;
    em.kind = mr.kind;
    em.defined_in = b;
    switch (mr.kind) {
      case MemberKind::Property: {
        const Property& p = blk.props[mr.index];
        em.name = p.name;
        em.declared = p.declared;
        em.expr = p.formula;
        em.origin_id = p.id;
        em.span = p.span;
        break;
      }
      case MemberKind::Requirement:
        em.expr = blk.reqs[mr.index].condition;
        em.origin_id = blk.reqs[mr.index].id;
        em.span = blk.reqs[mr.index].span;
        break;
      case MemberKind::Kpi:
        em.expr = blk.kpis[mr.index].metric;
        em.origin_id = blk.kpis[mr.index].id;
        em.span = blk.kpis[mr.index].span;
        break;
    }
    out.push_back(std::move(em));
  }
  return out;
}

namespace {
std::vector<ExpandedMember> filter(std::vector<ExpandedMember> all, MemberKind k) {
  all.erase(std::remove_if(all.begin(), all.end(), [k](const ExpandedMember& e) { return e.kind != k; }), all.end());
  return all;
}
}  // namespace

std::vector<ExpandedMember> allprops(const Model& m, BlockIndex b) {
  return filter(expanded_members(m, b), MemberKind::Property);
}

std::vector<ExpandedMember> allreqs(const Model& m, BlockIndex b) {
  return filter(expanded_members(m, b), MemberKind::Requirement);
}

}  // namespace roadmap
