#include "roadmap/values/value.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "roadmap/values/date.hpp"

namespace roadmap {

std::string ExprType::to_string() const {
  switch (kind) {
    case TypeKind::Boolean: return "Boolean";
    case TypeKind::Date: return "Date";
    case TypeKind::Duration: return "Duration";
    case TypeKind::Number:
      return unit.is_dimensionless() ? "Number" : "Number(" + unit.symbol() + ")";
  }
  return "?";
}

std::string format_number(double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string format_exact(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

Value Value::top(const ExprType& t) {
  switch (t.kind) {
    case TypeKind::Boolean: return BoolValue{Ternary::Maybe, false};
    case TypeKind::Number: return NumInterval{Interval::whole(), t.unit};
    case TypeKind::Date: return DateValue{Interval::whole()};
    case TypeKind::Duration: return DurationValue{Interval::whole()};
  }
  return {};
}

Value Value::tainted(const ExprType& t) {
  switch (t.kind) {
    case TypeKind::Boolean: return BoolValue{Ternary::Maybe, true};
    case TypeKind::Number: return NumInterval{Interval::tainted(), t.unit};
    case TypeKind::Date: return DateValue{Interval::tainted()};
    case TypeKind::Duration: return DurationValue{Interval::tainted()};
  }
  return {};
}

ExprType Value::type() const {
  if (is_number()) return ExprType::number(as_number().unit);
  return ExprType{kind(), {}};
}

bool Value::is_tainted() const {
  if (is_bool()) return as_bool().tainted;
  return range().empty;
}

bool Value::is_definite() const {
  if (is_bool()) return !as_bool().tainted && as_bool().value != Ternary::Maybe;
  return range().is_point();
}

Interval Value::range() const {
  if (is_number()) return as_number().range;
  if (is_date()) return as_date().months;
  if (is_duration()) return as_duration().months;
  const auto& b = as_bool();
  if (b.tainted) return Interval::tainted();
  switch (b.value) {
    case Ternary::False: return Interval::point(0.0);
    case Ternary::True: return Interval::point(1.0);
    default: return {0.0, 1.0, false};
  }
}

Value Value::with_range(const Interval& r) const {
  if (is_number()) return NumInterval{r, as_number().unit};
  if (is_date()) return DateValue{r};
  if (is_duration()) return DurationValue{r};
  if (r.empty) return BoolValue{Ternary::Maybe, true};
  bool f = r.contains(0.0);
  bool t = r.contains(1.0);
  if (f && t) return BoolValue{Ternary::Maybe, false};
  if (f) return BoolValue{Ternary::False, false};
  if (t) return BoolValue{Ternary::True, false};
  return BoolValue{Ternary::Maybe, true};
}

namespace {

using Fmt = std::string (*)(double, int);

std::string fmt4(double v, int) { return format_number(v, 4); }
std::string fmt_full(double v, int) { return format_exact(v); }

std::string date_text(double m, bool exact) {
  if (std::isinf(m)) return m > 0 ? "inf" : "-inf";
  if (!exact) return month_year(static_cast<long long>(std::llround(m)));
  double whole = std::floor(m);
  std::string base = month_year(static_cast<long long>(whole));
  if (whole == m) return base;
  return base + " + months(" + format_exact(m - whole) + ")";
}

std::string duration_text(double m, bool exact) {
  if (std::isinf(m)) return m > 0 ? "inf" : "-inf";
  return "months(" + (exact ? format_exact(m) : format_number(m, 4)) + ")";
}

std::string render(const Value& v, bool exact) {
  Fmt fmt = exact ? fmt_full : fmt4;
  if (v.is_bool()) {
    const auto& b = v.as_bool();
    return b.tainted ? "empty" : std::string(to_string(b.value));
  }
  Interval r = v.range();
  if (r.empty) return "empty";
  if (v.is_number()) {
    std::string u = v.as_number().unit.symbol();
    auto bound = [&](double x) {
      if (std::isinf(x)) return std::string(x > 0 ? "inf" : "-inf");
      return fmt(x, 4) + u;
    };
    if (r.is_point() || (!exact && bound(r.lo) == bound(r.hi))) return bound(r.lo);
    std::string s = "[" + bound(r.lo) + ".." + bound(r.hi) + "]";
    if (std::isinf(r.lo) && std::isinf(r.hi)) s += u;
    return s;
  }
  auto text = v.is_date() ? date_text : duration_text;
  if (r.is_point()) return text(r.lo, exact);
  return "[" + text(r.lo, exact) + ".." + text(r.hi, exact) + "]";
}

}  // namespace

std::string Value::to_string() const { return render(*this, false); }
std::string Value::to_exact_string() const { return render(*this, true); }

bool value_contains(const Value& outer, const Value& inner) {
  if (outer.kind() != inner.kind()) return false;
  if (outer.is_number() && outer.as_number().unit != inner.as_number().unit) return false;
  return outer.range().contains(inner.range());
}

}  // namespace roadmap
