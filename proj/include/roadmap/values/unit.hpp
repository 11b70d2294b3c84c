#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace roadmap {

/// Base dimensions a Unit is expressed over. The SI base set plus a
/// synthetic dimension for computational throughput.
enum class Dim : std::size_t {
  Length,
  Mass,
  Time,
  Current,
  Temperature,
  Amount,
  Luminosity,
  Flops,
};

inline constexpr std::size_t kDimCount = 8;

/// Physical dimension of a quantity as a vector of integer exponents.
/// Values are always stored in base-SI scale, so a Unit carries no scale.
class Unit {
public:
  constexpr Unit() = default;

  static constexpr Unit dimensionless() { return Unit{}; }
  static constexpr Unit base(Dim d, int exponent = 1) {
    Unit u;
    u.exps_[static_cast<std::size_t>(d)] = exponent;
    return u;
  }

  constexpr int exponent(Dim d) const { return exps_[static_cast<std::size_t>(d)]; }
  constexpr bool is_dimensionless() const {
    for (int e : exps_)
      if (e != 0) return false;
    return true;
  }

  constexpr Unit operator*(const Unit& o) const {
    Unit r;
    for (std::size_t i = 0; i < kDimCount; ++i) r.exps_[i] = exps_[i] + o.exps_[i];
    return r;
  }
  constexpr Unit operator/(const Unit& o) const {
    Unit r;
    for (std::size_t i = 0; i < kDimCount; ++i) r.exps_[i] = exps_[i] - o.exps_[i];
    return r;
  }
  constexpr Unit pow(int n) const {
    Unit r;
    for (std::size_t i = 0; i < kDimCount; ++i) r.exps_[i] = exps_[i] * n;
    return r;
  }
  /// Integer root, if every exponent is divisible by n.
  std::optional<Unit> root(int n) const;

  constexpr bool operator==(const Unit&) const = default;
  constexpr auto operator<=>(const Unit&) const = default;

  /// Canonical symbol: a named unit when one matches ("A", "V", "W"),
  /// otherwise a product of base symbols ("m*s^-1"). Empty if dimensionless.
  std::string symbol() const;
  /// True when symbol() is a single named unit usable as a literal suffix.
  bool has_named_symbol() const;

private:
  std::array<int, kDimCount> exps_{};
};

/// A unit symbol as written in source, resolved to its dimension and the
/// factor that converts a value in that unit to base-SI scale.
struct ScaledUnit {
  Unit unit;
  double scale = 1.0;
};

/// Resolves "V", "mA", "kW", "TFLOPS", ... Whole-symbol matches win over
/// prefix splits, so "m" is metre and "mm" is millimetre.
std::optional<ScaledUnit> parse_unit_symbol(std::string_view symbol);

/// Parses a unit expression as used in casts: `A`, `m/s`, `kg*m^2*s^-2`.
std::optional<ScaledUnit> parse_unit_expression(std::string_view text);

}  // namespace roadmap
