#include "roadmap/interface/api.hpp"

#include <charconv>
#include <stdexcept>
#include <vector>

#include "roadmap/interface/json.hpp"
#include "roadmap/values/date.hpp"

namespace roadmap {

namespace {

struct HttpError {
  int status;
  std::string message;
};

ApiResponse reply(int status, const Json& j) { return {status, dump(j)}; }

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    std::size_t j = path.find('/', i);
    if (j == std::string::npos) j = path.size();
    if (j > i) parts.push_back(path.substr(i, j - i));
    i = j + 1;
  }
  return parts;
}

const std::string& param(const ApiRequest& req, const std::string& name) {
  auto it = req.query.find(name);
  if (it == req.query.end() || it->second.empty()) throw HttpError{400, "missing query parameter '" + name + "'"};
  return it->second;
}

long long month_param(const ApiRequest& req, const std::string& name) {
  const std::string& text = param(req, name);
  auto m = parse_iso_month(text);
  if (!m) throw HttpError{400, "query parameter '" + name + "' must be YYYY-MM, got '" + text + "'"};
  return *m;
}

int step_param(const ApiRequest& req) {
  auto it = req.query.find("step");
  if (it == req.query.end() || it->second.empty()) return 1;
  int step = 0;
  const auto& s = it->second;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), step);
  if (ec != std::errc{} || p != s.data() + s.size() || step < 1)
    throw HttpError{400, "query parameter 'step' must be a positive integer, got '" + s + "'"};
  return step;
}

ApiResponse route(ModelRegistry& reg, const ApiRequest& req) {
  const auto parts = split_path(req.path);
  if (parts.empty() || parts[0] != "api" || parts.size() < 2 || parts[1] != "models")
    throw HttpError{404, "no such endpoint " + req.path};

  if (parts.size() == 2) {
    if (req.method != "GET") throw HttpError{405, req.method + " not allowed on " + req.path};
    Json list = Json::array();
    for (const auto& id : reg.ids()) {
      auto s = reg.get(id);
      if (!s) continue;
      list.push_back({{"id", id}, {"name", s->model().name}, {"blocks", s->model().blocks.size()},
                      {"constraints", s->constraints().constraints.size()}});
    }
    return reply(200, {{"models", list}});
  }

  const std::string& id = parts[2];
  auto snap = reg.get(id);
  if (!snap) throw HttpError{404, "unknown model '" + id + "'"};
  const std::string action = parts.size() > 3 ? parts[3] : "";
  if (parts.size() > 4) throw HttpError{404, "no such endpoint " + req.path};

  if (action == "source") {
    if (req.method != "PUT") throw HttpError{405, req.method + " not allowed on " + req.path};
    try {
      auto fresh = reg.replace(id, req.body);
      return reply(200, model_json(*fresh));
    } catch (const ModelError& e) {
      return reply(422, model_error_json(e, req.body));
    }
  }
  if (req.method != "GET") throw HttpError{405, req.method + " not allowed on " + req.path};
  if (action.empty()) return reply(200, model_json(*snap));
  if (action == "solve") return reply(200, solve_json(*snap, month_param(req, "t")));
  if (action == "sweep") {
    const long long from = month_param(req, "from"), to = month_param(req, "to");
    const int step = step_param(req);
    if (from > to) throw HttpError{400, "'from' " + iso_month(from) + " is after 'to' " + iso_month(to)};
    return reply(200, sweep_json(*snap, *snap->sweep(from, to, step)));
  }
  if (action == "trace") {
    const std::string& ref = param(req, "ref");
    const long long t = month_param(req, "t");
    if (!snap->constraints().find(ref)) throw HttpError{404, "unknown reference '" + ref + "'"};
    return reply(200, trace_json(*snap, ref, t));
  }
  throw HttpError{404, "no such endpoint " + req.path};
}

}  // namespace

ApiResponse handle_api(ModelRegistry& registry, const ApiRequest& req) {
  try {
    return route(registry, req);
  } catch (const HttpError& e) {
    return reply(e.status, error_json(e.message));
  } catch (const std::exception& e) {
    return reply(500, error_json(e.what()));
  }
}

}  // namespace roadmap
