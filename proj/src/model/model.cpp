#include "roadmap/model/model.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "roadmap/expr/parser.hpp"
#include "roadmap/model/relations.hpp"
#include "roadmap/values/unit.hpp"

namespace roadmap {

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep = ".") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string summarize(const std::vector<Diagnostic>& diags) {
  if (diags.empty()) return "invalid model";
  std::string msg = diags.front().message;
  if (diags.size() > 1) msg += " (+" + std::to_string(diags.size() - 1) + " more)";
  return msg;
}

std::optional<ExprType> parse_type_name(const std::string& text) {
  if (text == "bool" || text == "boolean") return ExprType::boolean();
  if (text == "num" || text == "number") return ExprType::number();
  if (text == "date") return ExprType::date();
  if (text == "duration") return ExprType::duration();
  if (auto su = parse_unit_expression(text); su && su->scale == 1.0) return ExprType::number(su->unit);
  return std::nullopt;
}

class ModelParser {
public:
  explicit ModelParser(std::string_view src) : toks_(tokenize(src)) {}

  Model run() {
    Model m;
    expect_word("model");
    m.name = expect_name("model name");
    expect_punct("{");
    while (!at_punct("}")) {
      if (peek().kind == Tok::End) fail("unexpected end of input, expected '}'", {"}", "block"});
      m.roots.push_back(parse_block(m, kNoBlock, ""));
    }
    advance();
    if (peek().kind != Tok::End) fail("unexpected input after model", {"end of input"});
    return m;
  }

private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& advance() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool at_punct(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }
  bool at_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }

  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected = {}) const {
    throw ParseError(msg, peek().span, std::move(expected));
  }
  void expect_punct(std::string_view p) {
    if (!at_punct(p)) fail("expected '" + std::string(p) + "'", {std::string(p)});
    advance();
  }
  void expect_word(std::string_view w) {
    if (!at_word(w)) fail("expected '" + std::string(w) + "'", {std::string(w)});
    advance();
  }
  std::string expect_name(const char* what) {
    if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail(std::string("expected ") + what, {"name"});
    return advance().text;
  }

  std::vector<std::string> parse_block_path() {
    std::vector<std::string> path{expect_name("block path")};
    while (at_punct(".")) {
      advance();
      path.push_back(expect_name("block path"));
    }
    return path;
  }

  BlockIndex parse_block(Model& m, BlockIndex parent, const std::string& prefix) {
    const Span start = peek().span;
    expect_word("block");
    Block b;
    b.name = expect_name("block name");
    b.id = prefix.empty() ? b.name : prefix + "." + b.name;
    b.parent = parent;
    if (at_word("implements")) {
      advance();
      do {
        const Span s = peek().span;
        b.implements_paths.push_back(parse_block_path());
        b.implements_spans.push_back({s.begin, toks_[pos_ - 1].span.end});
      } while (at_punct(",") && (advance(), true));
    }
    expect_punct("{");
    const BlockIndex self = m.blocks.size();
    m.blocks.push_back(std::move(b));

    while (!at_punct("}")) {
      const Span ms = peek().span;
      if (at_word("block")) {
        const BlockIndex child = parse_block(m, self, m.blocks[self].id);
        m.blocks[self].children.push_back(child);
      } else if (at_word("prop")) {
        advance();
        Property p;
        p.name = expect_name("property name");
        if (at_punct(":")) {
          advance();
          p.declared = parse_type();
        }
        if (at_punct("=")) {
          advance();
          p.formula = parse_embedded();
        }
        if (!p.declared && !p.formula) fail("expected ':' or '=' after property name", {":", "="});
        p.span = {ms.begin, last_end()};
        p.id = m.blocks[self].id + "." + p.name;
        Block& cur = m.blocks[self];
        cur.members.push_back({MemberKind::Property, cur.props.size()});
        cur.props.push_back(std::move(p));
      } else if (at_word("require")) {
        advance();
        Requirement r;
        r.condition = parse_embedded();
        r.span = {ms.begin, last_end()};
        Block& cur = m.blocks[self];
        cur.members.push_back({MemberKind::Requirement, cur.reqs.size()});
        cur.reqs.push_back(std::move(r));
      } else if (at_word("kpi")) {
        advance();
        Kpi k;
        k.metric = parse_embedded();
        k.span = {ms.begin, last_end()};
        Block& cur = m.blocks[self];
        k.id = cur.id + ".?kpi" + std::to_string(cur.kpis.size() + 1);
        cur.members.push_back({MemberKind::Kpi, cur.kpis.size()});
        cur.kpis.push_back(std::move(k));
      } else if (peek().kind == Tok::End) {
        fail("unexpected end of input, expected '}'", {"}"});
      } else {
        fail("expected a member", {"prop", "require", "kpi", "block", "}"});
      }
      if (at_punct(";")) advance();
    }
    m.blocks[self].span = {start.begin, peek().span.end};
    advance();
    return self;
  }

  ExprType parse_type() {
    const Span start = peek().span;
    std::string text;
    while (peek().kind != Tok::End && !at_punct("=") && !at_punct(";") && !at_punct("}") &&
           !(peek().kind == Tok::Ident && is_keyword(peek().text) && !text.empty())) {
      if (!text.empty() && (peek().kind == Tok::Ident || peek().kind == Tok::Number) &&
          toks_[pos_ - 1].kind != Tok::Punct)
        break;  // two adjacent words: the next member starts here
      text += peek().text + peek().unit;
      advance();
    }
    auto t = parse_type_name(text);
    if (!t) throw ParseError("unknown type '" + text + "'", {start.begin, last_end()}, {"bool", "num", "date", "duration", "unit"});
    return *t;
  }

  ExprPtr parse_embedded() {
    ExprParser p(toks_, pos_);
    ExprPtr e = p.parse_expression();
    pos_ = p.position();
    return e;
  }

  std::uint32_t last_end() const { return pos_ == 0 ? 0 : toks_[pos_ - 1].span.end; }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Lexical block lookup: the first segment is searched among the children of
// `scope`, then of each ancestor, then among top-level blocks.
std::optional<BlockIndex> lookup_block_path(const Model& m, BlockIndex scope, const std::vector<std::string>& path) {
  auto child_named = [&](BlockIndex parent, const std::string& name) -> std::optional<BlockIndex> {
    for (BlockIndex c : m.children_of(parent))
      if (m.blocks[c].name == name) return c;
    return std::nullopt;
  };
  for (BlockIndex s = scope;; s = m.blocks[s].parent) {
    if (auto first = child_named(s, path.front())) {
      BlockIndex cur = *first;
      bool ok = true;
      for (std::size_t i = 1; i < path.size() && ok; ++i) {
        auto next = child_named(cur, path[i]);
        if (next) cur = *next;
        else ok = false;
      }
      if (ok) return cur;
    }
    if (s == kNoBlock) return std::nullopt;
  }
}

void assign_labels(Model& m) {
  std::vector<std::vector<std::string>> segs;
  for (const Block& b : m.blocks) {
    std::vector<std::string> parts;
    std::stringstream ss(b.id);
    for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
    segs.push_back(std::move(parts));
  }
  for (std::size_t i = 0; i < m.blocks.size(); ++i) {
    for (std::size_t k = 1; k <= segs[i].size(); ++k) {
      auto suffix = [&](std::size_t j) {
        const auto& s = segs[j];
        if (s.size() < k) return std::vector<std::string>{};
        return std::vector<std::string>(s.end() - static_cast<std::ptrdiff_t>(k), s.end());
      };
      const auto mine = suffix(i);
      bool unique = true;
      for (std::size_t j = 0; j < m.blocks.size() && unique; ++j)
        if (j != i && suffix(j) == mine) unique = false;
      if (unique || k == segs[i].size()) {
        m.blocks[i].label = join(mine);
        break;
      }
    }
  }
}

void validate(Model& m) {
  std::vector<Diagnostic> diags;

  auto check_siblings = [&](const std::vector<BlockIndex>& kids) {
    std::set<std::string> seen;
    for (BlockIndex c : kids)
      if (!seen.insert(m.blocks[c].name).second)
        diags.push_back({"duplicate block name '" + m.blocks[c].name + "'", m.blocks[c].span});
  };
  check_siblings(m.roots);
  for (const Block& b : m.blocks) {
    check_siblings(b.children);
    std::set<std::string> names;
    for (const Property& p : b.props)
      if (!names.insert(p.name).second)
        diags.push_back({"duplicate property '" + p.name + "' in block " + b.id, p.span});
  }

  for (Block& b : m.blocks) {
    for (std::size_t i = 0; i < b.implements_paths.size(); ++i) {
      const auto target = lookup_block_path(m, static_cast<BlockIndex>(&b - m.blocks.data()), b.implements_paths[i]);
      if (!target) {
        diags.push_back({"unresolved interface '" + join(b.implements_paths[i]) + "'", b.implements_spans[i]});
      } else if (std::find(b.implements.begin(), b.implements.end(), *target) != b.implements.end()) {
        diags.push_back({"interface '" + join(b.implements_paths[i]) + "' listed twice", b.implements_spans[i]});
      } else {
        b.implements.push_back(*target);
      }
    }
  }
  if (!diags.empty()) throw ModelError(std::move(diags));

  // Cycle check over the implements graph.
  enum class Mark { None, Active, Done };
  std::vector<Mark> mark(m.blocks.size(), Mark::None);
  std::function<bool(BlockIndex)> dfs = [&](BlockIndex b) {
    mark[b] = Mark::Active;
    for (BlockIndex i : m.blocks[b].implements) {
      if (mark[i] == Mark::Active) return true;
      if (mark[i] == Mark::None && dfs(i)) return true;
    }
    mark[b] = Mark::Done;
    return false;
  };
  for (BlockIndex b = 0; b < m.blocks.size(); ++b) {
    if (mark[b] == Mark::None && dfs(b)) {
      diags.push_back({"implements cycle through block " + m.blocks[b].id, m.blocks[b].span});
      throw ModelError(std::move(diags));
    }
  }
}

// Requirement ids use the post-inheritance ordinal, so interfaces must be
// numbered before their implementations.
void assign_requirement_ids(Model& m) {
  std::vector<bool> done(m.blocks.size(), false);
  std::function<void(BlockIndex)> visit = [&](BlockIndex b) {
    if (done[b]) return;
    done[b] = true;
    for (BlockIndex i : m.blocks[b].implements) visit(i);
    std::size_t inherited = 0;
    for (const ExpandedMember& em : expanded_members(m, b))
      if (em.inherited && em.kind == MemberKind::Requirement) ++inherited;
    Block& blk = m.blocks[b];
    for (std::size_t k = 0; k < blk.reqs.size(); ++k)
      blk.reqs[k].id = blk.id + ".?requirement" + std::to_string(inherited + k + 1);
  };
  for (BlockIndex b = 0; b < m.blocks.size(); ++b) visit(b);
}

}  // namespace

ModelError::ModelError(std::vector<Diagnostic> diags) : std::runtime_error(summarize(diags)), diags_(std::move(diags)) {}

std::optional<BlockIndex> Model::find(std::string_view id) const {
  for (BlockIndex i = 0; i < blocks.size(); ++i)
    if (blocks[i].id == id) return i;
  for (BlockIndex i = 0; i < blocks.size(); ++i)
    if (blocks[i].label == id) return i;
  return std::nullopt;
}

const std::vector<BlockIndex>& Model::children_of(BlockIndex i) const {
  return i == kNoBlock ? roots : blocks[i].children;
}

Model parse_model(std::string_view source) {
  Model m;
  try {
    m = ModelParser(source).run();
  } catch (const ParseError& e) {
    throw ModelError({{e.what(), e.span()}});
  }
  m.source = std::string(source);
  validate(m);
  assign_labels(m);
  assign_requirement_ids(m);
  return m;
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

}  // namespace roadmap
