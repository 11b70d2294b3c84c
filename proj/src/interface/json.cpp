#include "roadmap/interface/json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "roadmap/expr/printer.hpp"
#include "roadmap/model/relations.hpp"
#include "roadmap/values/date.hpp"

namespace roadmap {

namespace {

Json number_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  if (x == 0) return 0;
  if (std::fabs(x) < 1e15 && x == std::trunc(x)) return static_cast<long long>(x);
  return x;
}

double round4(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return std::strtod(buf, nullptr);
}

Json date_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  return iso_month(static_cast<long long>(std::floor(x)));
}

Json value_json_impl(const Value& v, bool exact) {
  auto num = [&](double x) { return number_json(exact ? x : round4(x)); };
  Json j = Json::object();
  if (v.is_bool()) {
    if (v.is_tainted()) {
      j["ternary"] = nullptr;
      j["tainted"] = true;
    } else {
      j["ternary"] = to_string(v.as_bool().value);
    }
    return j;
  }
  if (v.is_tainted()) {
    j["lower"] = nullptr;
    j["upper"] = nullptr;
    j["tainted"] = true;
  } else if (v.is_date()) {
    j["lower"] = date_json(v.range().lo);
    j["upper"] = date_json(v.range().hi);
  } else {
    j["lower"] = num(v.range().lo);
    j["upper"] = num(v.range().hi);
  }
  if (v.is_number()) j["unit"] = v.as_number().unit.symbol();
  if (v.is_duration()) j["unit"] = "months";
  if (v.is_date()) j["unit"] = "date";
  return j;
}

Json uses_json(const Constraint* c) {
  Json out = Json::array();
  if (!c) return out;
  for (const auto& u : c->uses) out.push_back({{"span", span_json(u.span)}, {"ref", u.target.label()}, {"id", u.target.id()}});
  return out;
}

std::string text_at(const std::string& source, const Span& s) {
  if (s.begin >= s.end || s.end > source.size()) return "";
  return source.substr(s.begin, s.end - s.begin);
}

Json block_ids(const Model& m, const std::vector<BlockIndex>& bs) {
  Json out = Json::array();
  for (BlockIndex b : bs) out.push_back(m.block(b).id);
  return out;
}

// Index of the implementation a definite replacement value selects.
std::optional<BlockIndex> selected_impl(const Model& m, BlockIndex b, const Value& repl) {
  const auto alts = allimpls(m, b);
  if (alts.empty() || !repl.is_number() || repl.is_tainted() || !repl.is_definite()) return std::nullopt;
  const double k = repl.range().lo;
  if (k != std::trunc(k) || k < 1 || k > static_cast<double>(alts.size())) return std::nullopt;
  return alts[static_cast<std::size_t>(k) - 1];
}

std::size_t index_of(const ConstraintSystem& cs, const Constraint* c) {
  return static_cast<std::size_t>(c - cs.constraints.data());
}

}  // namespace

Json value_json(const Value& v) { return value_json_impl(v, false); }
Json exact_value_json(const Value& v) { return value_json_impl(v, true); }

Json span_json(const Span& s) { return {{"begin", s.begin}, {"end", s.end}}; }

Json model_json(const Snapshot& s) {
  const Model& m = s.model();
  const ConstraintSystem& cs = s.constraints();
  Json blocks = Json::array();
  for (BlockIndex b = 0; b < m.blocks.size(); ++b) {
    const Block& blk = m.block(b);
    const auto alts = allimpls(m, b);
    Json jb;
    jb["id"] = blk.id;
    jb["label"] = blk.label;
    jb["name"] = blk.name;
    jb["parent"] = blk.parent == kNoBlock ? Json(nullptr) : Json(m.block(blk.parent).id);
    jb["children"] = block_ids(m, blk.children);
    jb["implements"] = block_ids(m, blk.implements);
    jb["alternatives"] = block_ids(m, alts);
    jb["span"] = span_json(blk.span);
    jb["availability"] = cs.find(Reference::availability(blk.id))->lhs.label();
    jb["replacement"] = cs.find(Reference::replacement(blk.id))->lhs.label();

    Json members = Json::array();
    int req_n = 0, kpi_n = 0;
    for (const ExpandedMember& em : expanded_members(m, b)) {
      Json jm;
      const Constraint* c = nullptr;
      if (em.kind == MemberKind::Property) {
        c = cs.find(Reference::property(blk.id, em.name));
        jm["kind"] = "property";
        jm["name"] = em.name;
        jm["ref"] = c->lhs.label();
        jm["id"] = c->lhs.id();
        auto t = cs.type_of(c->lhs);
        jm["type"] = t ? Json(t->to_string()) : Json(nullptr);
      } else if (em.kind == MemberKind::Requirement) {
        c = cs.find(Reference::requirement(blk.id, ++req_n));
        jm["kind"] = "requirement";
        jm["ref"] = c->lhs.label();
        jm["id"] = c->lhs.id();
      } else {
        ++kpi_n;
        jm["kind"] = "kpi";
        jm["id"] = blk.id + ".?kpi" + std::to_string(kpi_n);
        Json per_alt = Json::array();
        for (BlockIndex alt : alts) {
          const Constraint* k = cs.find(Reference::kpi(blk.id, kpi_n, m.block(alt).id));
          if (!c) c = k;
          per_alt.push_back({{"alternative", m.block(alt).id}, {"ref", k->lhs.label()}});
        }
        jm["alternatives"] = per_alt;
      }
      jm["expr"] = em.expr ? Json(to_source(em.expr)) : Json(nullptr);
      jm["text"] = text_at(m.source, em.span);
      jm["span"] = span_json(em.span);
      jm["defined_in"] = m.block(em.defined_in).id;
      jm["origin"] = em.origin_id;
      jm["inherited"] = em.inherited;
      jm["uses"] = uses_json(c);
      members.push_back(std::move(jm));
    }
    jb["members"] = std::move(members);
    blocks.push_back(std::move(jb));
  }
  Json j;
  j["id"] = s.id();
  j["name"] = m.name;
  j["source"] = m.source;
  j["blocks"] = std::move(blocks);
  j["constraints"] = cs.constraints.size();
  return j;
}

Json solve_json(const Snapshot& s, long long month, const SolveResult& r) {
  const Model& m = s.model();
  const ConstraintSystem& cs = s.constraints();
  std::shared_ptr<const Sweep> horizon;
  std::optional<std::size_t> k;
  if (month >= s.horizon().from && month <= s.horizon().to) {
    horizon = s.horizon_sweep();
    k = horizon->sample_at(month);
  }

  Json values = Json::object(), exact = Json::object(), text = Json::object(), cases = Json::object();
  for (std::size_t ci = 0; ci < cs.constraints.size(); ++ci) {
    const Constraint& c = cs.constraints[ci];
    const std::string label = c.lhs.label();
    values[label] = value_json(r.values[ci]);
    exact[label] = exact_value_json(r.values[ci]);
    text[label] = r.values[ci].to_string();
    if (has_case(c.lhs))
      cases[label] = k ? Json(to_string(classify(horizon->series(ci), *k, unconditional(c)))) : Json(nullptr);
  }

  Json blocks = Json::array();
  for (BlockIndex b = 0; b < m.blocks.size(); ++b) {
    const Block& blk = m.block(b);
    const Constraint* av = cs.find(Reference::availability(blk.id));
    const Constraint* rp = cs.find(Reference::replacement(blk.id));
    const Value& repl = r.values[index_of(cs, rp)];
    Json jb;
    jb["id"] = blk.id;
    jb["label"] = blk.label;
    jb["availability"] = value_json(r.values[index_of(cs, av)])["ternary"];
    jb["case"] = cases[av->lhs.label()];
    jb["replacement"] = value_json(repl);
    auto sel = selected_impl(m, b, repl);
    jb["selected"] = sel ? Json(m.block(*sel).id) : Json(nullptr);
    blocks.push_back(std::move(jb));
  }

  Json j;
  j["model"] = s.id();
  j["t"] = iso_month(month);
  j["converged"] = r.converged;
  j["rounds"] = r.rounds;
  j["values"] = std::move(values);
  j["text"] = std::move(text);
  j["cases"] = std::move(cases);
  j["blocks"] = std::move(blocks);
  j["exact"] = std::move(exact);
  return j;
}

Json solve_json(const Snapshot& s, long long month) {
  return solve_json(s, month, solve(s.constraints(), month, s.horizon().solve));
}

Json sweep_json(const Snapshot& s, const Sweep& sw) {
  const ConstraintSystem& cs = s.constraints();
  Json months = Json::array();
  for (long long mo : sw.months) months.push_back(iso_month(mo));
  Json series = Json::object(), cases = Json::object();
  for (std::size_t ci = 0; ci < cs.constraints.size(); ++ci) {
    const Constraint& c = cs.constraints[ci];
    const auto vs = sw.series(ci);
    Json arr = Json::array();
    for (const Value& v : vs) arr.push_back(value_json(v));
    series[c.lhs.label()] = std::move(arr);
    if (has_case(c.lhs)) {
      Json cs_arr = Json::array();
      for (std::size_t k = 0; k < vs.size(); ++k) cs_arr.push_back(to_string(classify(vs, k, unconditional(c))));
      cases[c.lhs.label()] = std::move(cs_arr);
    }
  }
  Json j;
  j["model"] = s.id();
  j["from"] = sw.months.empty() ? Json(nullptr) : Json(iso_month(sw.months.front()));
  j["to"] = sw.months.empty() ? Json(nullptr) : Json(iso_month(sw.months.back()));
  j["step"] = sw.months.size() > 1 ? sw.months[1] - sw.months[0] : 1;
  j["months"] = std::move(months);
  j["series"] = std::move(series);
  j["cases"] = std::move(cases);
  return j;
}

Json trace_json(const Snapshot& s, const std::string& ref, long long month) {
  const ConstraintSystem& cs = s.constraints();
  const Constraint* c = cs.find(ref);
  if (!c) throw std::out_of_range("unknown reference " + ref);
  const std::size_t ci = index_of(cs, c);
  auto sw = s.sweep(month - 1, month, 1);
  const auto elements = trace_report(cs, *sw, ci, 1);
  Json ids = Json::array(), els = Json::array();
  for (const auto& e : elements) {
    ids.push_back(e.id);
    els.push_back({{"id", e.id}, {"changed", e.changed ? Json(*e.changed) : Json(nullptr)}});
  }
  Json j;
  j["model"] = s.id();
  j["ref"] = c->lhs.label();
  j["id"] = c->lhs.id();
  j["t"] = iso_month(month);
  j["value"] = value_json(sw->samples[1].values[ci]);
  j["ids"] = std::move(ids);
  j["elements"] = std::move(els);
  return j;
}

Json error_json(const std::string& message, std::optional<Span> span) {
  Json j;
  j["error"] = message;
  if (span) j["span"] = span_json(*span);
  return j;
}

Json model_error_json(const ModelError& e, const std::string& source) {
  const auto& ds = e.diagnostics();
  Json j = ds.empty() ? error_json(e.what()) : error_json(ds.front().message, ds.front().span);
  Json all = Json::array();
  for (const auto& d : ds) {
    auto [line, col] = line_col(source, d.span.begin);
    all.push_back({{"message", d.message}, {"span", span_json(d.span)}, {"line", line}, {"column", col}});
  }
  j["diagnostics"] = std::move(all);
  return j;
}

std::pair<int, int> line_col(const std::string& source, std::uint32_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < source.size() && i < offset; ++i) {
    if (source[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

namespace {

bool is_leaf(const Json& j) {
  if (j.is_object())
    for (const auto& [_, v] : j.items())
      if (v.is_structured()) return false;
  if (j.is_array())
    for (const auto& v : j)
      if (v.is_structured()) return false;
  return true;
}

// Containers of scalars stay on one line; everything else is indented.
void write(std::ostream& out, const Json& j, int indent) {
  if (is_leaf(j)) {
    out << j.dump();
    return;
  }
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  bool first = true;
  if (j.is_object()) {
    out << "{\n";
    for (const auto& [k, v] : j.items()) {
      if (!first) out << ",\n";
      first = false;
      out << pad << Json(k).dump() << ": ";
      write(out, v, indent + 2);
    }
    out << '\n' << std::string(static_cast<std::size_t>(indent), ' ') << '}';
  } else {
    out << "[\n";
    for (const auto& v : j) {
      if (!first) out << ",\n";
      first = false;
      out << pad;
      write(out, v, indent + 2);
    }
    out << '\n' << std::string(static_cast<std::size_t>(indent), ' ') << ']';
  }
}

}  // namespace

std::string dump(const Json& j) {
  std::ostringstream out;
  write(out, j, 0);
  out << '\n';
  return out.str();
}

}  // namespace roadmap
