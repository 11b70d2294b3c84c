#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "roadmap/expr/ast.hpp"

namespace roadmap {

/// Type error pointing at the offending subexpressions.
class TypeError : public std::runtime_error {
public:
  TypeError(const std::string& msg, std::vector<Span> spans)
      : std::runtime_error(msg), spans_(std::move(spans)) {}
  const std::vector<Span>& spans() const { return spans_; }

private:
  std::vector<Span> spans_;
};

/// Type of an identifier or reference node, or nullopt when unknown.
using TypeEnv = std::function<std::optional<ExprType>(const Expr& node)>;
using TypeAnnotations = std::unordered_map<const Expr*, ExprType>;

/// Infers the type of `e`, recording every node's type in `annotations`
/// when given. Throws TypeError.
ExprType typecheck(const ExprPtr& e, const TypeEnv& env, TypeAnnotations* annotations = nullptr);

}  // namespace roadmap
