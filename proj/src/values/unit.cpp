#include "roadmap/values/unit.hpp"

#include <cctype>
#include <charconv>
#include <utility>
#include <vector>

namespace roadmap {

namespace {

struct NamedUnit {
  std::string_view symbol;
  Unit unit;
  double scale;
};

constexpr Unit L = Unit::base(Dim::Length);
constexpr Unit M = Unit::base(Dim::Mass);
constexpr Unit S = Unit::base(Dim::Time);
constexpr Unit I = Unit::base(Dim::Current);

// Order matters for rendering: the first unscaled match is the canonical symbol.
const std::vector<NamedUnit>& named_units() {
  static const std::vector<NamedUnit> table = {
      {"A", I, 1.0},
      {"V", M * L.pow(2) / S.pow(3) / I, 1.0},
      {"W", M * L.pow(2) / S.pow(3), 1.0},
      {"J", M * L.pow(2) / S.pow(2), 1.0},
      {"N", M * L / S.pow(2), 1.0},
      {"Hz", Unit{} / S, 1.0},
      {"Ohm", M * L.pow(2) / S.pow(3) / I.pow(2), 1.0},
      {"C", I * S, 1.0},
      {"Pa", M / L / S.pow(2), 1.0},
      {"m", L, 1.0},
      {"kg", M, 1.0},
      {"s", S, 1.0},
      {"K", Unit::base(Dim::Temperature), 1.0},
      {"mol", Unit::base(Dim::Amount), 1.0},
      {"cd", Unit::base(Dim::Luminosity), 1.0},
      {"FLOPS", Unit::base(Dim::Flops), 1.0},
      {"g", M, 1e-3},
      {"min", S, 60.0},
      {"h", S, 3600.0},
  };
  return table;
}

struct Prefix {
  std::string_view text;
  double factor;
};

constexpr Prefix kPrefixes[] = {
    {"p", 1e-12}, {"n", 1e-9}, {"u", 1e-6}, {"\xC2\xB5", 1e-6}, {"m", 1e-3}, {"c", 1e-2},
    {"k", 1e3},   {"M", 1e6},  {"G", 1e9},  {"T", 1e12},        {"P", 1e15},
};

const NamedUnit* find_named(std::string_view sym) {
  for (const auto& n : named_units())
    if (n.symbol == sym) return &n;
  return nullptr;
}

constexpr std::string_view kBaseSymbols[kDimCount] = {"m", "kg", "s", "A", "K", "mol", "cd", "FLOPS"};

}  // namespace

std::optional<Unit> Unit::root(int n) const {
  Unit r;
  for (std::size_t i = 0; i < kDimCount; ++i) {
    if (exps_[i] % n != 0) return std::nullopt;
    r.exps_[i] = exps_[i] / n;
  }
  return r;
}

bool Unit::has_named_symbol() const {
  if (is_dimensionless()) return true;
  for (const auto& n : named_units())
    if (n.scale == 1.0 && n.unit == *this) return true;
  return false;
}

std::string Unit::symbol() const {
  if (is_dimensionless()) return {};
  for (const auto& n : named_units())
    if (n.scale == 1.0 && n.unit == *this) return std::string(n.symbol);
  std::string out;
  for (std::size_t i = 0; i < kDimCount; ++i) {
    if (exps_[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += kBaseSymbols[i];
    if (exps_[i] != 1) out += '^' + std::to_string(exps_[i]);
  }
  return out;
}

std::optional<ScaledUnit> parse_unit_symbol(std::string_view symbol) {
  if (symbol.empty()) return std::nullopt;
  if (const auto* n = find_named(symbol)) return ScaledUnit{n->unit, n->scale};
  for (const auto& p : kPrefixes) {
    if (symbol.size() <= p.text.size() || symbol.substr(0, p.text.size()) != p.text) continue;
    if (const auto* n = find_named(symbol.substr(p.text.size())))
      return ScaledUnit{n->unit, n->scale * p.factor};
  }
  return std::nullopt;
}

std::optional<ScaledUnit> parse_unit_expression(std::string_view text) {
  ScaledUnit acc;
  std::size_t pos = 0;
  bool divide = false;
  bool expect_factor = true;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  while (true) {
    skip_ws();
    if (expect_factor) {
      std::size_t start = pos;
      while (pos < text.size() &&
             (std::isalpha(static_cast<unsigned char>(text[pos])) || static_cast<unsigned char>(text[pos]) >= 0x80))
        ++pos;
      auto factor = parse_unit_symbol(text.substr(start, pos - start));
      if (!factor) return std::nullopt;
      int power = 1;
      skip_ws();
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        skip_ws();
        std::size_t num_start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        auto [ptr, ec] = std::from_chars(text.data() + num_start + (text[num_start] == '+' ? 1 : 0),
                                         text.data() + pos, power);
        if (ec != std::errc{} || ptr != text.data() + pos) return std::nullopt;
      }
      if (divide) power = -power;
      acc.unit = acc.unit * factor->unit.pow(power);
      double s = 1.0;
      for (int k = 0; k < (power < 0 ? -power : power); ++k) s *= factor->scale;
      acc.scale = power < 0 ? acc.scale / s : acc.scale * s;
      expect_factor = false;
      continue;
    }
    if (pos >= text.size()) break;
    if (text[pos] == '*' || text[pos] == '/') {
      divide = text[pos] == '/';
      ++pos;
      expect_factor = true;
      continue;
    }
    return std::nullopt;
  }
  if (expect_factor) return std::nullopt;
  return acc;
}

}  // namespace roadmap
