#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "roadmap/expr/ast.hpp"
#include "roadmap/expr/printer.hpp"
#include "roadmap/model/model.hpp"

namespace roadmap {

/// A source identifier bound to the quantity it denotes.
struct ResolvedUse {
  Span span;
  Reference target;
};

/// One equation `lhs(T) = rhs` of the flat constraint system.
struct Constraint {
  Reference lhs;
  ExprPtr rhs;
  BlockIndex block = kNoBlock;
  /// Model elements this constraint stems from: its own element id and,
  /// for inherited members, the element the text was copied from.
  std::vector<std::string> origins;
  /// Span of the originating member in the model source; empty for the
  /// generated availability/replacement constraints.
  Span source_span;
  bool inherited = false;
  /// Resolved identifiers of the member's own expression.
  std::vector<ResolvedUse> uses;

  std::string id() const { return lhs.id(); }
};

struct ConstraintSystem {
  std::vector<Constraint> constraints;
  std::unordered_map<Reference, ExprType, ReferenceHash> types;

  const Constraint* find(const Reference& lhs) const;
  /// Looks up by `Reference::id()` or `Reference::label()`.
  const Constraint* find(const std::string& id_or_label) const;
  std::optional<ExprType> type_of(const Reference& r) const;

  void reindex();

private:
  std::unordered_map<Reference, std::size_t, ReferenceHash> by_lhs_;
  std::unordered_map<std::string, std::size_t> by_name_;
};

/// Binds an identifier path written in `scope`: local names first, then each
/// ancestor, then top-level blocks. A path naming a block denotes its
/// availability.
std::optional<Reference> resolve_path(const Model& m, BlockIndex scope, const std::vector<std::string>& path);

/// Replaces identifiers by references and expands aggregations over the
/// direct children of `scope`. Throws ModelError on unresolved names.
ExprPtr resolve_expression(const Model& m, BlockIndex scope, const ExprPtr& e,
                           std::vector<ResolvedUse>* uses = nullptr);

/// Full pipeline: inheritance expansion, resolution, constraint generation
/// and type checking. Throws ModelError with every problem found.
ConstraintSystem lower(const Model& m);

/// Σ over blocks of |allprops| + |allreqs| + |kpis|·|allimpls| + 2.
std::size_t expected_constraint_count(const Model& m);

/// `lhs = rhs` per line, references rendered with display labels.
std::string emit_listing(const ConstraintSystem& cs, const PrintOptions& opts = {});
std::string constraint_source(const Constraint& c, const PrintOptions& opts = {});

struct ListingEntry {
  Reference lhs;
  ExprPtr rhs;
};

/// Reads a listing back: a sequence of `lhs = rhs` equations, line breaks
/// insignificant. References carry the labels as written.
std::vector<ListingEntry> parse_listing(std::string_view text);

/// Canonical form for comparing generated and hand-written listings:
/// constant subtrees folded to literals, references keyed by label.
ExprPtr normalize_for_comparison(const ExprPtr& e);

}  // namespace roadmap
