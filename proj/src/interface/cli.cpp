#include "roadmap/interface/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "roadmap/interface/api.hpp"
#include "roadmap/interface/json.hpp"
#include "roadmap/values/date.hpp"

namespace roadmap {

namespace {

struct UsageError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError{"cannot read " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string stem(const std::string& path) {
  auto slash = path.find_last_of('/');
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = name.rfind('.');
  return dot == std::string::npos || dot == 0 ? name : name.substr(0, dot);
}

long long month_arg(const std::string& flag, const std::string& text) {
  auto m = parse_iso_month(text);
  if (!m) throw UsageError{flag + " expects YYYY-MM, got '" + text + "'"};
  return *m;
}

void print_diagnostics(std::ostream& err, const std::string& path, const std::string& source, const ModelError& e) {
  if (e.diagnostics().empty()) err << path << ": error: " << e.what() << '\n';
  for (const auto& d : e.diagnostics()) {
    auto [line, col] = line_col(source, d.span.begin);
    err << path << ':' << line << ':' << col << ": error: " << d.message << '\n';
  }
}

// Numbers as explicit intervals, everything else in canonical text form.
std::string cli_text(const Value& v) {
  if (v.is_number() && !v.is_tainted()) {
    const std::string unit = v.as_number().unit.symbol();
    return "[" + format_number(v.range().lo) + unit + ".." + format_number(v.range().hi) + unit + "]";
  }
  return v.to_string();
}

struct SolveArgs {
  std::string file, at, trace;
  bool emit = false, trace_rounds = false, json = false;
};

int do_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const std::string source = read_file(a.file);
  const long long month = month_arg("--at", a.at);
  std::optional<Snapshot> snap;
  try {
    snap.emplace(stem(a.file), source);
  } catch (const ModelError& e) {
    print_diagnostics(err, a.file, source, e);
    return 1;
  }
  const ConstraintSystem& cs = snap->constraints();
  if (a.emit) {
    out << emit_listing(cs);
    return 0;
  }
  if (!a.trace.empty() && !cs.find(a.trace)) throw UsageError{"unknown reference '" + a.trace + "'"};

  SolveOptions opts = snap->horizon().solve;
  if (a.trace_rounds)
    opts.on_round = [&err](const RoundReport& r) {
      err << "round " << r.round << ":\n";
      for (const auto& c : r.changes) err << "  " << c << '\n';
    };
  const SolveResult r = solve(cs, month, opts);

  if (a.json) {
    out << dump(a.trace.empty() ? solve_json(*snap, month, r) : trace_json(*snap, a.trace, month));
    return 0;
  }
  for (std::size_t ci = 0; ci < cs.constraints.size(); ++ci) {
    const Reference& lhs = cs.constraints[ci].lhs;
    const Value& v = r.values[ci];
    out << lhs.label() << " = " << (lhs.kind == RefKind::Replacement ? v.to_string() : cli_text(v)) << '\n';
  }
  if (!r.converged) out << "# not converged after " << r.rounds << " rounds\n";
  if (!a.trace.empty()) {
    Json t = trace_json(*snap, a.trace, month);
    out << "\ntrace " << t["ref"].get<std::string>() << " at " << iso_month(month) << ":\n";
    for (const auto& e : t["elements"]) {
      const char* flag = e["changed"].is_null() ? "" : e["changed"].get<bool>() ? "  changed" : "  constant";
      out << "  " << e["id"].get<std::string>() << flag << '\n';
    }
  }
  return 0;
}

struct SweepArgs {
  std::string file, from, to;
  int step = 1;
  bool csv = false, json = false;
};

int do_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  const std::string source = read_file(a.file);
  SweepOptions o = default_sweep_options();
  o.from = month_arg("--from", a.from);
  o.to = month_arg("--to", a.to);
  o.step = a.step;
  if (o.from > o.to) throw UsageError{"--from " + a.from + " is after --to " + a.to};
  std::optional<Snapshot> snap;
  try {
    snap.emplace(stem(a.file), source, o);
  } catch (const ModelError& e) {
    print_diagnostics(err, a.file, source, e);
    return 1;
  }
  auto sw = snap->horizon_sweep();
  if (a.json) out << dump(sweep_json(*snap, *sw));
  else out << sweep_csv(snap->constraints(), *sw);
  return 0;
}

int do_check(const std::string& file, std::ostream& out, std::ostream& err) {
  const std::string source = read_file(file);
  try {
    Snapshot snap(stem(file), source);
    out << file << ": ok, " << snap.model().blocks.size() << " blocks, " << snap.constraints().constraints.size()
        << " constraints\n";
    return 0;
  } catch (const ModelError& e) {
    print_diagnostics(err, file, source, e);
    return 1;
  }
}

int do_serve(const std::vector<std::string>& files, int port, const std::string& host, const std::string& static_dir,
             std::ostream& out, std::ostream& err) {
  ModelRegistry reg;
  for (const auto& f : files) {
    const std::string source = read_file(f);
    try {
      reg.add(stem(f), source);
    } catch (const ModelError& e) {
      print_diagnostics(err, f, source, e);
      return 1;
    }
  }
  HttpService svc(reg, {host, port, static_dir});
  const int bound = svc.bind();
  if (bound < 0) {
    err << "cannot listen on " << host << ':' << port << '\n';
    return 1;
  }
  out << "serving " << files.size() << " model(s) on http://" << host << ':' << bound << "/api/models" << std::endl;
  return svc.run() ? 0 : 1;
}

int default_port() {
  if (const char* p = std::getenv("PORT")) {
    char* end = nullptr;
    long v = std::strtol(p, &end, 10);
    if (end && *end == '\0' && v > 0 && v < 65536) return static_cast<int>(v);
  }
  return 8080;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-dependent roadmap models: check, solve, sweep and serve"};
  app.name("roadmap");
  app.require_subcommand(1);

  std::string check_file;
  auto* check = app.add_subcommand("check", "Parse, validate and type-check a model");
  check->add_option("FILE", check_file, "Model file (.rdm)")->required();

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a model at one month");
  solve_cmd->add_option("FILE", sa.file, "Model file (.rdm)")->required();
  solve_cmd->add_option("--at", sa.at, "Month, YYYY-MM")->required();
  solve_cmd->add_flag("--emit-constraints", sa.emit, "Print the constraint listing instead of solving");
  solve_cmd->add_option("--trace", sa.trace, "Print the trace of a reference, e.g. Fuse.MaxLoadCurrent");
  solve_cmd->add_flag("--trace-rounds", sa.trace_rounds, "Print the bounds changed in every round to stderr");
  solve_cmd->add_flag("--json", sa.json, "JSON output");

  SweepArgs wa;
  auto* sweep_cmd = app.add_subcommand("sweep", "Solve at every month of a range");
  sweep_cmd->add_option("FILE", wa.file, "Model file (.rdm)")->required();
  sweep_cmd->add_option("--from", wa.from, "First month, YYYY-MM")->required();
  sweep_cmd->add_option("--to", wa.to, "Last month, YYYY-MM")->required();
  sweep_cmd->add_option("--step", wa.step, "Months between samples")->check(CLI::PositiveNumber);
  auto* csv = sweep_cmd->add_flag("--csv", wa.csv, "CSV output (default)");
  sweep_cmd->add_flag("--json", wa.json, "JSON output")->excludes(csv);

  std::vector<std::string> serve_files;
  int port = default_port();
  std::string host = "0.0.0.0", static_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Serve models over HTTP");
  serve_cmd->add_option("FILE", serve_files, "Model files (.rdm)")->required();
  serve_cmd->add_option("--port", port, "Port (default: $PORT or 8080)")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", host, "Address to bind");
  serve_cmd->add_option("--static", static_dir, "Directory of UI assets served at /")->check(CLI::ExistingDirectory);

  std::vector<std::string> argv_store{"roadmap"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) return do_check(check_file, out, err);
    if (*solve_cmd) return do_solve(sa, out, err);
    if (*sweep_cmd) return do_sweep(wa, out, err);
    return do_serve(serve_files, port, host, static_dir, out, err);
  } catch (const UsageError& e) {
    err << "roadmap: " << e.message << '\n';
    return 2;
  }
}

}  // namespace roadmap
