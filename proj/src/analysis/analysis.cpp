#include "roadmap/analysis/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "roadmap/values/date.hpp"

namespace roadmap {

std::string to_string(AvailabilityCase c) {
  switch (c) {
    case AvailabilityCase::Always: return "always";
    case AvailabilityCase::Currently: return "currently";
    case AvailabilityCase::NotYet: return "not_yet";
    case AvailabilityCase::NoLonger: return "no_longer";
    case AvailabilityCase::Maybe: return "maybe";
    case AvailabilityCase::Never: return "never";
  }
  return "";
}

SweepOptions default_sweep_options() {
  SweepOptions o;
  o.from = month_index(2021, 1);
  o.to = month_index(2040, 1);
  return o;
}

std::vector<Value> Sweep::series(std::size_t ci) const {
  std::vector<Value> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.values.at(ci));
  return out;
}

std::optional<std::size_t> Sweep::sample_at(long long month) const {
  auto it = std::lower_bound(months.begin(), months.end(), month);
  if (it == months.end() || *it != month) return std::nullopt;
  return static_cast<std::size_t>(it - months.begin());
}

Sweep sweep(const ConstraintSystem& cs, const SweepOptions& opts) {
  if (opts.step < 1) throw std::invalid_argument("step must be at least 1");
  if (opts.from > opts.to) throw std::invalid_argument("sweep start " + iso_month(opts.from) + " is after its end " +
                                                       iso_month(opts.to));
  Sweep s;
  for (long long m = opts.from; m <= opts.to; m += opts.step) s.months.push_back(m);
  s.samples.resize(s.months.size());

  SolveOptions so = opts.solve;
  so.on_round = nullptr;
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(s.months.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < s.months.size(); i = next++) s.samples[i] = solve(cs, s.months[i], so);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return s;
}

namespace {

std::optional<Ternary> truth(const Value& v) {
  if (!v.is_bool() || v.is_tainted()) return std::nullopt;
  return v.as_bool().value;
}

}  // namespace

AvailabilityCase classify(const std::vector<Value>& series, std::size_t k, bool unconditional) {
  if (k >= series.size()) throw std::out_of_range("sample outside the sweep");
  auto is = [&](std::size_t i, Ternary t) { return truth(series[i]) == t; };
  if (unconditional && std::all_of(series.begin(), series.end(), [](const Value& v) {
        return truth(v) == Ternary::True;
      }))
    return AvailabilityCase::Always;
  if (is(k, Ternary::True)) return AvailabilityCase::Currently;
  if (is(k, Ternary::Maybe)) return AvailabilityCase::Maybe;
  for (std::size_t i = k + 1; i < series.size(); ++i)
    if (is(i, Ternary::True)) return AvailabilityCase::NotYet;
  for (std::size_t i = 0; i < k; ++i)
    if (is(i, Ternary::True)) return AvailabilityCase::NoLonger;
  return AvailabilityCase::Never;
}

bool has_case(const Reference& r) { return r.kind == RefKind::Requirement || r.kind == RefKind::Availability; }

bool unconditional(const Constraint& c) {
  return c.rhs->kind == ExprKind::Literal && c.rhs->value == Value::boolean(true);
}

bool changed_since_previous(const Sweep& s, std::size_t ci, std::size_t k) {
  if (k == 0) throw std::out_of_range("no previous sample at the start of the sweep");
  if (k >= s.samples.size()) throw std::out_of_range("sample outside the sweep");
  return s.samples[k].values.at(ci).to_exact_string() != s.samples[k - 1].values.at(ci).to_exact_string();
}

std::vector<TraceElement> trace_report(const ConstraintSystem& cs, const Sweep& s, std::size_t ci, std::size_t k) {
  const TraceSet& t = s.samples.at(k).traces.at(ci);
  std::map<std::string, std::optional<bool>> by_id;
  for (std::size_t i : t.indices()) {
    std::optional<bool> changed;
    if (k > 0) changed = changed_since_previous(s, i, k);
    for (const auto& id : cs.constraints[i].origins) {
      auto& slot = by_id[id];
      if (changed) slot = slot.value_or(false) || *changed;
    }
  }
  std::vector<TraceElement> out;
  for (const auto& [id, changed] : by_id) out.push_back({id, changed});
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string bound_text(const Value& v, double x) {
  if (v.is_date() && std::isfinite(x)) return iso_month(static_cast<long long>(x));
  return format_exact(x);
}

}  // namespace

std::string sweep_csv(const ConstraintSystem& cs, const Sweep& s) {
  std::ostringstream out;
  out << "monthISO,reference,lower,upper,unit,ternary,case\n";
  std::vector<std::vector<Value>> series(cs.constraints.size());
  for (std::size_t ci = 0; ci < cs.constraints.size(); ++ci) series[ci] = s.series(ci);
  for (std::size_t k = 0; k < s.months.size(); ++k) {
    for (std::size_t ci = 0; ci < cs.constraints.size(); ++ci) {
      const Constraint& c = cs.constraints[ci];
      const Value& v = series[ci][k];
      std::string lower, upper, unit, ternary, kase;
      if (v.is_bool()) {
        ternary = v.is_tainted() ? "tainted" : std::string(to_string(v.as_bool().value));
        if (has_case(c.lhs)) kase = to_string(classify(series[ci], k, unconditional(c)));
      } else if (v.is_tainted()) {
        ternary = "tainted";
      } else {
        lower = bound_text(v, v.range().lo);
        upper = bound_text(v, v.range().hi);
        if (v.is_number()) unit = v.as_number().unit.symbol();
        if (v.is_duration()) unit = "months";
      }
      if (v.is_number() && v.is_tainted()) unit = v.as_number().unit.symbol();
      out << iso_month(s.months[k]) << ',' << csv_field(c.lhs.label()) << ',' << lower << ',' << upper << ','
          << csv_field(unit) << ',' << ternary << ',' << kase << '\n';
    }
  }
  return out.str();
}

}  // namespace roadmap
