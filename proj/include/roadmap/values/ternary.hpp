#pragma once

#include <cstdint>
#include <string_view>

namespace roadmap {

/// Three-valued truth, ordered false < maybe < true. `maybe` stands for the
/// boolean range [false..true].
enum class Ternary : std::uint8_t { False = 0, Maybe = 1, True = 2 };

constexpr Ternary to_ternary(bool b) { return b ? Ternary::True : Ternary::False; }

constexpr Ternary operator!(Ternary a) {
  switch (a) {
    case Ternary::False: return Ternary::True;
    case Ternary::True: return Ternary::False;
    default: return Ternary::Maybe;
  }
}

// Strong Kleene: & is the minimum, | the maximum in the truth order.
constexpr Ternary operator&(Ternary a, Ternary b) { return a < b ? a : b; }
constexpr Ternary operator|(Ternary a, Ternary b) { return a < b ? b : a; }

/// Smallest ternary covering both operands (join in the information order).
constexpr Ternary hull(Ternary a, Ternary b) { return a == b ? a : Ternary::Maybe; }

constexpr bool can_be_true(Ternary a) { return a != Ternary::False; }
constexpr bool can_be_false(Ternary a) { return a != Ternary::True; }

constexpr std::string_view to_string(Ternary a) {
  switch (a) {
    case Ternary::False: return "false";
    case Ternary::True: return "true";
    default: return "maybe";
  }
}

}  // namespace roadmap
