#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "roadmap/values/interval.hpp"
#include "roadmap/values/ternary.hpp"
#include "roadmap/values/unit.hpp"

namespace roadmap {

struct NumInterval {
  Interval range;
  Unit unit;
  bool operator==(const NumInterval&) const = default;
};

struct BoolValue {
  Ternary value = Ternary::Maybe;
  bool tainted = false;
  bool operator==(const BoolValue&) const = default;
};

/// Absolute month index range.
struct DateValue {
  Interval months;
  bool operator==(const DateValue&) const = default;
};

/// Month count range.
struct DurationValue {
  Interval months;
  bool operator==(const DurationValue&) const = default;
};

enum class TypeKind { Boolean, Number, Date, Duration };

/// Static type of an expression or value. `unit` only matters for Number.
struct ExprType {
  TypeKind kind = TypeKind::Number;
  Unit unit;

  static ExprType boolean() { return {TypeKind::Boolean, {}}; }
  static ExprType number(Unit u = {}) { return {TypeKind::Number, u}; }
  static ExprType date() { return {TypeKind::Date, {}}; }
  static ExprType duration() { return {TypeKind::Duration, {}}; }

  bool operator==(const ExprType& o) const {
    return kind == o.kind && (kind != TypeKind::Number || unit == o.unit);
  }
  std::string to_string() const;
};

class ValueError : public std::runtime_error {
public:
  enum class Kind { Type, UnitMismatch, Arity, Argument };
  ValueError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

/// The runtime quantity every expression evaluates to.
class Value {
public:
  using Storage = std::variant<NumInterval, BoolValue, DateValue, DurationValue>;

  Value() : v_(BoolValue{}) {}
  Value(NumInterval n) : v_(n) {}
  Value(BoolValue b) : v_(b) {}
  Value(DateValue d) : v_(d) {}
  Value(DurationValue d) : v_(d) {}

  static Value number(double v, Unit u = {}) { return NumInterval{Interval::point(v), u}; }
  static Value number(Interval r, Unit u = {}) { return NumInterval{r, u}; }
  static Value boolean(Ternary t) { return BoolValue{t, false}; }
  static Value boolean(bool b) { return BoolValue{to_ternary(b), false}; }
  static Value date(double month) { return DateValue{Interval::point(month)}; }
  static Value duration(double months) { return DurationValue{Interval::point(months)}; }
  /// Widest value of a type: the whole line or `maybe`.
  static Value top(const ExprType& t);
  /// Tainted (empty) value of a type.
  static Value tainted(const ExprType& t);

  TypeKind kind() const { return static_cast<TypeKind>(index_to_kind(v_.index())); }
  ExprType type() const;

  bool is_number() const { return std::holds_alternative<NumInterval>(v_); }
  bool is_bool() const { return std::holds_alternative<BoolValue>(v_); }
  bool is_date() const { return std::holds_alternative<DateValue>(v_); }
  bool is_duration() const { return std::holds_alternative<DurationValue>(v_); }

  const NumInterval& as_number() const { return std::get<NumInterval>(v_); }
  const BoolValue& as_bool() const { return std::get<BoolValue>(v_); }
  const DateValue& as_date() const { return std::get<DateValue>(v_); }
  const DurationValue& as_duration() const { return std::get<DurationValue>(v_); }
  const Storage& storage() const { return v_; }

  bool is_tainted() const;
  /// A single point (or a definite truth value).
  bool is_definite() const;
  /// The numeric range behind numbers, dates and durations; booleans map to
  /// false=0, true=1.
  Interval range() const;
  /// Same kind, with the numeric range replaced.
  Value with_range(const Interval& r) const;

  /// Canonical display text: `[3A..4A]`, `maybe`, `Jun2021`, `months(5)`.
  /// Numbers show 4 significant digits.
  std::string to_string() const;
  /// Same shape as to_string() but bounds at full round-trip precision.
  std::string to_exact_string() const;

  bool operator==(const Value& o) const { return v_ == o.v_; }

private:
  static constexpr int index_to_kind(std::size_t i) {
    // Variant order is Number, Bool, Date, Duration.
    constexpr int map[] = {static_cast<int>(TypeKind::Number), static_cast<int>(TypeKind::Boolean),
                           static_cast<int>(TypeKind::Date), static_cast<int>(TypeKind::Duration)};
    return map[i];
  }
  Storage v_;
};

/// `ref_value` contains `v` as sets (same kind, range inclusion).
bool value_contains(const Value& outer, const Value& inner);

/// Formats a double with `digits` significant digits; "inf"/"-inf" for infinities.
std::string format_number(double v, int digits = 4);
/// Shortest text that parses back to exactly `v`.
std::string format_exact(double v);

}  // namespace roadmap
