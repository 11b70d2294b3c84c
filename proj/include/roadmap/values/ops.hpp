#pragma once

#include <span>
#include <string_view>

#include "roadmap/values/value.hpp"

namespace roadmap {

enum class BinaryOp { Add, Sub, Mul, Div, Pow, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnaryOp { Neg, Not };

std::string_view to_string(BinaryOp op);
bool is_arithmetic(BinaryOp op);
bool is_relational(BinaryOp op);
bool is_logical(BinaryOp op);
/// Relation with operands swapped: a < b  <=>  b > a.
BinaryOp flip_relation(BinaryOp op);
/// Logical complement of a relation: !(a < b)  <=>  a >= b.
BinaryOp negate_relation(BinaryOp op);

/// Result type of a binary operator, or ValueError for a disallowed
/// combination. Shared by the evaluator and the type checker.
ExprType binary_result_type(BinaryOp op, const ExprType& a, const ExprType& b,
                            const Value* constant_rhs = nullptr);
ExprType unary_result_type(UnaryOp op, const ExprType& a);

/// Interval arithmetic over numbers, dates and durations (+ - * / ^).
Value arith(BinaryOp op, const Value& a, const Value& b);
/// Three-valued comparison: true iff the relation holds for every pair of
/// points, false iff for none, maybe otherwise.
Value compare(BinaryOp op, const Value& a, const Value& b);
Ternary compare_ranges(BinaryOp op, const Interval& a, const Interval& b);
Value kleene(BinaryOp op, const Value& a, const Value& b);
Value apply_binary(BinaryOp op, const Value& a, const Value& b);
Value apply_unary(UnaryOp op, const Value& a);

/// Set intersection; disjoint operands give a tainted value.
Value intersect(const Value& a, const Value& b);
/// Smallest value covering both operands.
Value hull(const Value& a, const Value& b);

/// Built-in functions of the expression language. Throws ValueError on
/// arity or type problems; certain domain violations yield tainted.
Value apply_function(std::string_view name, std::span<const Value> args);
bool is_builtin_function(std::string_view name);
/// Result type of a builtin from argument types.
ExprType function_result_type(std::string_view name, std::span<const ExprType> args);

/// 1-based index of the first maximum; an integer range when the operands
/// overlap too much to decide.
Value index_of_max(std::span<const Value> args);

}  // namespace roadmap
