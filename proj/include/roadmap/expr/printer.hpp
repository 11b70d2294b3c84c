#pragma once

#include <string>

#include "roadmap/expr/ast.hpp"

namespace roadmap {

struct PrintOptions {
  /// Render references with stable ids instead of display labels.
  bool use_ids = false;
};

/// Canonical source text. Equality prints as `=`, parentheses only where
/// precedence requires them, references always carry their time argument.
std::string to_source(const ExprPtr& e, const PrintOptions& opts = {});

/// Source form of a literal value (`12V`, `Jan2021`, `maybe`, `[1..2]`).
std::string literal_source(const Value& v);

}  // namespace roadmap
