#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "roadmap/expr/ast.hpp"

namespace roadmap {

struct Property {
  std::string name;
  std::optional<ExprType> declared;  // from `prop X : TYPE`
  ExprPtr formula;                   // null for declared-only properties
  Span span;                         // whole member
  std::string id;                    // element id, e.g. "Vehicle.TotalCurrent"
};

struct Requirement {
  ExprPtr condition;
  Span span;
  std::string id;  // "Vehicle.Fuse.?requirement1" (local ordinal)
};

struct Kpi {
  ExprPtr metric;
  Span span;
  std::string id;  // "Vehicle.Fuse.?kpi1"
};

enum class MemberKind { Property, Requirement, Kpi };

/// Position of a member in declaration order.
struct MemberRef {
  MemberKind kind;
  std::size_t index;  // into props / reqs / kpis
};

using BlockIndex = std::size_t;
inline constexpr BlockIndex kNoBlock = static_cast<BlockIndex>(-1);

struct Block {
  std::string name;
  std::string id;     // qualified path, e.g. "Vehicle.Fuse"
  std::string label;  // shortest unique suffix of id
  BlockIndex parent = kNoBlock;
  std::vector<BlockIndex> children;
  /// Interfaces this block implements, as written and as resolved.
  std::vector<std::vector<std::string>> implements_paths;
  std::vector<Span> implements_spans;
  std::vector<BlockIndex> implements;
  std::vector<Property> props;
  std::vector<Requirement> reqs;
  std::vector<Kpi> kpis;
  std::vector<MemberRef> members;
  Span span;
};

/// A parsed, validated model. Blocks are stored flat in pre-order.
struct Model {
  std::string name;
  std::string source;
  std::vector<Block> blocks;
  std::vector<BlockIndex> roots;

  const Block& block(BlockIndex i) const { return blocks[i]; }
  std::optional<BlockIndex> find(std::string_view id) const;
  /// Children of a block, or the top-level blocks for kNoBlock.
  const std::vector<BlockIndex>& children_of(BlockIndex i) const;
};

struct Diagnostic {
  std::string message;
  Span span;
};

/// Parse or validation failure; carries every problem found.
class ModelError : public std::runtime_error {
public:
  explicit ModelError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

private:
  std::vector<Diagnostic> diags_;
};

/// Parses `.rdm` text and validates structure: unique sibling and property
/// names, resolvable `implements` targets, acyclic implementation graph.
Model parse_model(std::string_view source);

/// Reads and parses a file. Throws std::runtime_error if it cannot be read.
Model load_model(const std::string& path);

}  // namespace roadmap
