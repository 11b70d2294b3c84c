#pragma once

#include <vector>

#include "roadmap/model/model.hpp"

namespace roadmap {

/// Blocks that directly implement `a`, in model order.
std::vector<BlockIndex> impls(const Model& m, BlockIndex a);
/// Blocks with at least one implementation, in model order.
std::vector<BlockIndex> interfaces(const Model& m);
/// Transitive implementations of `a`, in model order.
std::vector<BlockIndex> allimpls(const Model& m, BlockIndex a);

/// One property or requirement of a block after inheritance.
struct ExpandedMember {
  MemberKind kind = MemberKind::Property;
  std::string name;                  // property name
  std::optional<ExprType> declared;  // property declared type
  ExprPtr expr;                      // formula / condition / metric
  BlockIndex defined_in = kNoBlock;  // block whose source holds the text
  std::string origin_id;             // element id of the original definition
  Span span;
  bool inherited = false;
};

/// Properties and requirements of `b` with inheritance applied: inherited
/// members first (interfaces in declared order, overridden properties
/// dropped, first definition wins on conflicts), then local members in
/// declaration order. KPIs are local only and appear at their declared
/// position.
std::vector<ExpandedMember> expanded_members(const Model& m, BlockIndex b);

std::vector<ExpandedMember> allprops(const Model& m, BlockIndex b);
std::vector<ExpandedMember> allreqs(const Model& m, BlockIndex b);

}  // namespace roadmap
