#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "roadmap/expr/ast.hpp"

namespace roadmap {

/// Syntax error with the offending span and the tokens that would have
/// been accepted there.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, Span span, std::vector<std::string> expected = {})
      : std::runtime_error(msg), span_(span), expected_(std::move(expected)) {}
  Span span() const { return span_; }
  const std::vector<std::string>& expected() const { return expected_; }

private:
  Span span_;
  std::vector<std::string> expected_;
};

enum class Tok {
  Number,     // text holds the digits, unit the suffix (may be empty)
  Ident,
  Date,       // Jan2021
  Special,    // ?availability, ?requirement1 ...
  Punct,      // operators and brackets, text holds the symbol
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::string unit;
  Span span;
};

/// Splits source text into tokens. `//` comments and whitespace are skipped.
/// `?name` tokens are only produced when `allow_special` is set.
std::vector<Token> tokenize(std::string_view source, bool allow_special = false);

struct ParseOptions {
  /// Accept constraint-listing syntax: `A.?requirementN(T)` and friends,
  /// with every dotted path read as a resolved reference.
  bool listing = false;
};

/// Recursive-descent parser over a token vector. Exposed so the model parser
/// can embed expressions in its own token stream.
class ExprParser {
public:
  ExprParser(const std::vector<Token>& tokens, std::size_t pos, ParseOptions opts = {});

  ExprPtr parse_expression();
  std::size_t position() const { return pos_; }

private:
  const Token& peek(std::size_t ahead = 0) const;
  const Token& advance();
  bool at_punct(std::string_view p) const;
  bool accept_punct(std::string_view p);
  const Token& expect_punct(std::string_view p);
  bool at_keyword(std::string_view k) const;
  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected = {}) const;

  ExprPtr parse_or();
  ExprPtr parse_and();
  ExprPtr parse_relational();
  ExprPtr parse_additive();
  ExprPtr parse_multiplicative();
  ExprPtr parse_power();
  ExprPtr parse_unary();
  ExprPtr parse_postfix();
  ExprPtr parse_primary();
  ExprPtr parse_if();
  ExprPtr parse_path();
  ExprPtr parse_listing_path(std::vector<std::string> segments, Span start);
  std::vector<ExprPtr> parse_call_args();

  const std::vector<Token>& toks_;
  std::size_t pos_;
  ParseOptions opts_;
  int depth_ = 0;
};

/// Parses a complete expression; trailing input is an error.
ExprPtr parse_expr(std::string_view source, ParseOptions opts = {});

/// Words that cannot be used as names.
bool is_keyword(std::string_view word);

}  // namespace roadmap
