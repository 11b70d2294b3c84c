#include "roadmap/expr/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numbers>

#include "roadmap/values/date.hpp"

namespace roadmap {

namespace {

constexpr std::string_view kKeywords[] = {"model", "block", "implements", "prop", "require", "kpi", "if",
                                          "then",  "else",  "true",       "false", "maybe",  "inf", "T", "PI"};

// Longest first so that "<=" wins over "<".
constexpr std::string_view kPuncts[] = {"..", "<=", ">=", "==", "!=", "(", ")", "[", "]", ",", ".", "+", "-",
                                        "*",  "/",  "^",  "<",  ">",  "=", "!", "&", "|", ":", ";", "{", "}"};

constexpr int kMaxDepth = 200;

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_'; }

bool is_date_word(std::string_view w) {
  if (w.size() != 7) return false;
  if (!month_from_abbrev(w.substr(0, 3))) return false;
  return std::all_of(w.begin() + 3, w.end(), [](unsigned char c) { return std::isdigit(c); });
}

Span join(Span a, Span b) { return {std::min(a.begin, b.begin), std::max(a.end, b.end)}; }

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Number: return "number '" + t.text + t.unit + "'";
    default: return "'" + t.text + "'";
  }
}

}  // namespace

bool is_keyword(std::string_view word) {
  return std::find(std::begin(kKeywords), std::end(kKeywords), word) != std::end(kKeywords);
}

std::vector<Token> tokenize(std::string_view src, bool allow_special) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  auto span = [](std::size_t a, std::size_t b) {
    return Span{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  };
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isdigit(c)) {
      while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      if (i + 1 < n && src[i] == '.' && std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      }
      if (i < n && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) {
          i = j;
          while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      Token t{Tok::Number, std::string(src.substr(start, i - start)), {}, {}};
      std::size_t ustart = i;
      while (i < n) {
        unsigned char u = static_cast<unsigned char>(src[i]);
        if (std::isalpha(u)) {
          ++i;
        } else if (u == 0xC2 && i + 1 < n && static_cast<unsigned char>(src[i + 1]) == 0xB5) {
          i += 2;  // micro sign
        } else {
          break;
        }
      }
      t.unit = std::string(src.substr(ustart, i - ustart));
      t.span = span(start, i);
      out.push_back(std::move(t));
      continue;
    }
    if (ident_start(c)) {
      while (i < n && ident_char(static_cast<unsigned char>(src[i]))) ++i;
      std::string word(src.substr(start, i - start));
      Tok kind = is_date_word(word) ? Tok::Date : Tok::Ident;
      out.push_back({kind, std::move(word), {}, span(start, i)});
      continue;
    }
    if (c == '?' && allow_special && i + 1 < n && ident_start(static_cast<unsigned char>(src[i + 1]))) {
      ++i;
      while (i < n && ident_char(static_cast<unsigned char>(src[i]))) ++i;
      out.push_back({Tok::Special, std::string(src.substr(start, i - start)), {}, span(start, i)});
      continue;
    }
    bool matched = false;
    for (std::string_view p : kPuncts) {
      if (src.substr(i, p.size()) == p) {
        out.push_back({Tok::Punct, std::string(p), {}, span(i, i + p.size())});
        i += p.size();
        matched = true;
        break;
      }
    }
    if (!matched) {
      std::size_t len = 1;
      if (c >= 0x80) {
        while (i + len < n && (static_cast<unsigned char>(src[i + len]) & 0xC0) == 0x80) ++len;
      }
      throw ParseError("unexpected character '" + std::string(src.substr(i, len)) + "'", span(i, i + len));
    }
  }
  out.push_back({Tok::End, "", {}, span(n, n)});
  return out;
}

ExprParser::ExprParser(const std::vector<Token>& tokens, std::size_t pos, ParseOptions opts)
    : toks_(tokens), pos_(pos), opts_(opts) {}

const Token& ExprParser::peek(std::size_t ahead) const {
  std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
  return toks_[i];
}

const Token& ExprParser::advance() {
  const Token& t = toks_[pos_];
  if (pos_ + 1 < toks_.size()) ++pos_;
  return t;
}

bool ExprParser::at_punct(std::string_view p) const {
  return peek().kind == Tok::Punct && peek().text == p;
}

bool ExprParser::accept_punct(std::string_view p) {
  if (!at_punct(p)) return false;
  advance();
  return true;
}

const Token& ExprParser::expect_punct(std::string_view p) {
  if (!at_punct(p)) fail("expected '" + std::string(p) + "' but found " + describe(peek()), {std::string(p)});
  return advance();
}

bool ExprParser::at_keyword(std::string_view k) const { return peek().kind == Tok::Ident && peek().text == k; }

void ExprParser::fail(const std::string& msg, std::vector<std::string> expected) const {
  throw ParseError(msg, peek().span, std::move(expected));
}

ExprPtr ExprParser::parse_expression() {
  if (++depth_ > kMaxDepth) fail("expression nested too deeply");
  ExprPtr e = parse_or();
  --depth_;
  return e;
}

ExprPtr ExprParser::parse_or() {
  ExprPtr lhs = parse_and();
  while (at_punct("|")) {
    advance();
    ExprPtr rhs = parse_and();
    lhs = ast::binary(BinaryOp::Or, lhs, rhs, join(lhs->span, rhs->span));
  }
  return lhs;
}

ExprPtr ExprParser::parse_and() {
  ExprPtr lhs = parse_relational();
  while (at_punct("&")) {
    advance();
    ExprPtr rhs = parse_relational();
    lhs = ast::binary(BinaryOp::And, lhs, rhs, join(lhs->span, rhs->span));
  }
  return lhs;
}

ExprPtr ExprParser::parse_relational() {
  ExprPtr lhs = parse_additive();
  for (;;) {
    BinaryOp op;
    if (at_punct("<")) op = BinaryOp::Lt;
    else if (at_punct("<=")) op = BinaryOp::Le;
    else if (at_punct(">")) op = BinaryOp::Gt;
    else if (at_punct(">=")) op = BinaryOp::Ge;
    else if (at_punct("=") || at_punct("==")) op = BinaryOp::Eq;
    else if (at_punct("!=")) op = BinaryOp::Ne;
    else return lhs;
    advance();
    ExprPtr rhs = parse_additive();
    lhs = ast::binary(op, lhs, rhs, join(lhs->span, rhs->span));
  }
}

ExprPtr ExprParser::parse_additive() {
  ExprPtr lhs = parse_multiplicative();
  for (;;) {
    BinaryOp op;
    if (at_punct("+")) op = BinaryOp::Add;
    else if (at_punct("-")) op = BinaryOp::Sub;
    else return lhs;
    advance();
    ExprPtr rhs = parse_multiplicative();
    lhs = ast::binary(op, lhs, rhs, join(lhs->span, rhs->span));
  }
}

ExprPtr ExprParser::parse_multiplicative() {
  ExprPtr lhs = parse_power();
  for (;;) {
    BinaryOp op;
    if (at_punct("*")) op = BinaryOp::Mul;
    else if (at_punct("/")) op = BinaryOp::Div;
    else return lhs;
    advance();
    ExprPtr rhs = parse_power();
    lhs = ast::binary(op, lhs, rhs, join(lhs->span, rhs->span));
  }
}

ExprPtr ExprParser::parse_power() {
  ExprPtr base = parse_unary();
  if (!at_punct("^")) return base;
  advance();
  if (++depth_ > kMaxDepth) fail("expression nested too deeply");
  ExprPtr exponent = parse_power();
  --depth_;
  return ast::binary(BinaryOp::Pow, base, exponent, join(base->span, exponent->span));
}

ExprPtr ExprParser::parse_unary() {
  if (at_punct("-") || at_punct("!")) {
    Span s = advance().span;
    UnaryOp op = toks_[pos_ - 1].text == "-" ? UnaryOp::Neg : UnaryOp::Not;
    if (++depth_ > kMaxDepth) fail("expression nested too deeply");
    ExprPtr operand = parse_unary();
    --depth_;
    return ast::unary(op, operand, join(s, operand->span));
  }
  return parse_postfix();
}

ExprPtr ExprParser::parse_postfix() {
  bool bare_number = peek().kind == Tok::Number && peek().unit.empty();
  ExprPtr e = parse_primary();
  while (at_punct("[")) {
    advance();
    std::string text;
    while (!at_punct("]")) {
      if (peek().kind == Tok::End) fail("unterminated unit cast", {"]"});
      text += peek().text + peek().unit;
      advance();
    }
    Span close = advance().span;
    auto unit = parse_unit_expression(text);
    if (!unit) throw ParseError("unknown unit '" + text + "'", {e->span.end, close.end});
    Span s = join(e->span, close);
    if (bare_number) {
      // A bare number followed by a unit in brackets is a literal in that unit.
      Interval r = e->value.range() * Interval::point(unit->scale);
      e = ast::literal(Value::number(r, unit->unit), s);
    } else {
      e = ast::unit_cast(unit->unit, e, s);
    }
    bare_number = false;
  }
  return e;
}

ExprPtr ExprParser::parse_if() {
  Span start = advance().span;  // "if"
  ExprPtr c = parse_expression();
  if (!at_keyword("then")) fail("expected 'then' but found " + describe(peek()), {"then"});
  advance();
  ExprPtr t = parse_expression();
  if (!at_keyword("else")) fail("expected 'else' but found " + describe(peek()), {"else"});
  advance();
  ExprPtr f = parse_expression();
  return ast::cond(c, t, f, join(start, f->span));
}

std::vector<ExprPtr> ExprParser::parse_call_args() {
  std::vector<ExprPtr> args;
  expect_punct("(");
  if (accept_punct(")")) return args;
  for (;;) {
    args.push_back(parse_expression());
    if (accept_punct(",")) continue;
    expect_punct(")");
    return args;
  }
}

ExprPtr ExprParser::parse_primary() {
  const Token& t = peek();
  switch (t.kind) {
    case Tok::Number: {
      advance();
      double v = 0.0;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc()) throw ParseError("malformed number '" + t.text + "'", t.span);
      if (t.unit.empty()) return ast::literal(Value::number(v), t.span);
      auto unit = parse_unit_symbol(t.unit);
      if (!unit) throw ParseError("unknown unit '" + t.unit + "'", t.span);
      return ast::literal(Value::number(Interval::point(v) * Interval::point(unit->scale), unit->unit), t.span);
    }
    case Tok::Date: {
      advance();
      int month = *month_from_abbrev(std::string_view(t.text).substr(0, 3));
      int year = 0;
      std::from_chars(t.text.data() + 3, t.text.data() + 7, year);
      return ast::literal(Value::date(static_cast<double>(month_index(year, month))), t.span);
    }
    case Tok::Punct: {
      if (t.text == "(") {
        Span open = advance().span;
        ExprPtr inner = parse_expression();
        expect_punct(")");
        (void)open;
        return inner;
      }
      if (t.text == "[") {
        Span open = advance().span;
        ExprPtr lo = parse_expression();
        expect_punct("..");
        ExprPtr hi = parse_expression();
        Span close = expect_punct("]").span;
        return ast::interval(lo, hi, join(open, close));
      }
      break;
    }
    case Tok::Ident: {
      if (t.text == "if") return parse_if();
      if (t.text == "true" || t.text == "false" || t.text == "maybe") {
        advance();
        Ternary v = t.text == "true" ? Ternary::True : t.text == "false" ? Ternary::False : Ternary::Maybe;
        return ast::literal(Value::boolean(v), t.span);
      }
      if (t.text == "inf") {
        advance();
        return ast::literal(Value::number(kInf), t.span);
      }
      if (t.text == "PI") {
        advance();
        return ast::literal(Value::number(std::numbers::pi), t.span);
      }
      if (t.text == "T") {
        advance();
        return ast::time(t.span);
      }
      if (is_keyword(t.text)) break;
      bool is_call = peek(1).kind == Tok::Punct && peek(1).text == "(";
      if (is_call && is_aggregation(t.text)) {
        Span start = advance().span;
        expect_punct("(");
        ExprPtr body = parse_expression();
        Span close = expect_punct(")").span;
        return ast::aggregate(t.text, body, join(start, close));
      }
      if (is_call && is_builtin_function(t.text)) {
        std::string name = t.text;
        Span start = advance().span;
        auto args = parse_call_args();
        return ast::call(name, std::move(args), join(start, toks_[pos_ - 1].span));
      }
      return parse_path();
    }
    default: break;
  }
  fail("expected an expression but found " + describe(t),
       {"number", "identifier", "date", "(", "[", "-", "!", "if", "true", "false", "maybe", "inf", "T"});
}

ExprPtr ExprParser::parse_path() {
  std::vector<std::string> segments;
  Span start = peek().span;
  Span end = start;
  segments.push_back(advance().text);
  while (at_punct(".")) {
    advance();
    const Token& seg = peek();
    bool ok = (seg.kind == Tok::Ident && !is_keyword(seg.text)) || (opts_.listing && seg.kind == Tok::Special);
    if (!ok) fail("expected a name after '.' but found " + describe(seg), {"identifier"});
    end = seg.span;
    segments.push_back(advance().text);
  }
  if (opts_.listing) return parse_listing_path(std::move(segments), start);
  Span path_span = join(start, end);
  if (at_punct("(")) {
    advance();
    ExprPtr time = parse_expression();
    Span close = expect_punct(")").span;
    return ast::ident(std::move(segments), time, join(start, close));
  }
  return ast::ident(std::move(segments), ast::time({path_span.end, path_span.end}, true), path_span);
}

ExprPtr ExprParser::parse_listing_path(std::vector<std::string> segments, Span start) {
  Span end = toks_[pos_ - 1].span;
  if (segments.size() < 2) throw ParseError("reference needs a block and a member", join(start, end));
  std::string member = segments.back();
  segments.pop_back();
  std::string block;
  for (const auto& s : segments) block += (block.empty() ? "" : ".") + s;

  std::string impl;
  std::vector<ExprPtr> args;
  if (accept_punct("(")) {
    bool closed = false;
    if (member.rfind("?kpi", 0) == 0) {
      // ?kpiN(Alternative, T): the first argument names a block.
      if (peek().kind != Tok::Ident) fail("expected an alternative block name", {"identifier"});
      impl = advance().text;
      while (accept_punct(".")) {
        if (peek().kind != Tok::Ident) fail("expected a name after '.'", {"identifier"});
        impl += "." + advance().text;
      }
      if (!accept_punct(",")) {
        end = expect_punct(")").span;
        closed = true;
      }
    }
    if (!closed) {
      if (!at_punct(")")) args.push_back(parse_expression());
      end = expect_punct(")").span;
    }
  }
  auto take_time = [&](std::size_t expected_args) -> ExprPtr {
    if (args.size() == expected_args) return args.back();
    if (args.size() + 1 == expected_args) return ast::time({end.end, end.end}, true);
    throw ParseError("wrong number of reference arguments", join(start, end));
  };

  auto number_after = [&](std::string_view prefix) -> int {
    std::string_view rest = std::string_view(member).substr(prefix.size());
    int n = 0;
    auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
    if (ec != std::errc() || p != rest.data() + rest.size() || n < 1)
      throw ParseError("malformed reference member '" + member + "'", join(start, end));
    return n;
  };

  Reference r;
  ExprPtr time;
  if (member == "?availability") {
    r = Reference::availability(block);
    time = take_time(1);
  } else if (member == "?replacement") {
    r = Reference::replacement(block);
    time = take_time(1);
  } else if (member.rfind("?requirement", 0) == 0) {
    r = Reference::requirement(block, number_after("?requirement"));
    time = take_time(1);
  } else if (member.rfind("?kpi", 0) == 0) {
    int n = number_after("?kpi");
    if (impl.empty()) throw ParseError("?kpi reference needs an alternative block", join(start, end));
    r = Reference::kpi(block, n, impl);
    time = take_time(1);
  } else if (member.front() == '?') {
    throw ParseError("unknown reference member '" + member + "'", join(start, end));
  } else {
    r = Reference::property(block, member);
    time = take_time(1);
  }
  return ast::ref(std::move(r), time, join(start, end));
}

ExprPtr parse_expr(std::string_view source, ParseOptions opts) {
  auto tokens = tokenize(source, opts.listing);
  ExprParser p(tokens, 0, opts);
  ExprPtr e = p.parse_expression();
  const Token& rest = tokens[p.position()];
  if (rest.kind != Tok::End) throw ParseError("unexpected " + describe(rest) + " after expression", rest.span);
  return e;
}

}  // namespace roadmap
