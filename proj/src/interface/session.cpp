#include "roadmap/interface/session.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace roadmap {

Snapshot::Snapshot(std::string id, std::string source, SweepOptions horizon)
    : id_(std::move(id)), model_(parse_model(source)), cs_(lower(model_)), horizon_(std::move(horizon)) {}

std::shared_ptr<const Sweep> Snapshot::sweep(long long from, long long to, int step) const {
  std::shared_future<std::shared_ptr<const Sweep>> fut;
  std::promise<std::shared_ptr<const Sweep>> promise;
  bool owner = false;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_tuple(from, to, step);
    auto it = sweeps_.find(key);
    if (it == sweeps_.end()) {
      fut = promise.get_future().share();
      sweeps_.emplace(key, fut);
      owner = true;
    } else {
      fut = it->second;
    }
  }
  if (owner) {
    try {
      SweepOptions o = horizon_;
      o.from = from;
      o.to = to;
      o.step = step;
      promise.set_value(std::make_shared<const Sweep>(roadmap::sweep(cs_, o)));
    } catch (...) {
      promise.set_exception(std::current_exception());
      std::lock_guard<std::mutex> lock(mu_);
      sweeps_.erase(std::make_tuple(from, to, step));
    }
  }
  return fut.get();
}

std::shared_ptr<const Sweep> Snapshot::horizon_sweep() const {
  return sweep(horizon_.from, horizon_.to, horizon_.step);
}

void ModelRegistry::add(const std::string& id, const std::string& source) {
  auto snap = std::make_shared<const Snapshot>(id, source, horizon_);
  std::lock_guard<std::mutex> lock(mu_);
  models_[id] = std::move(snap);
}

std::string ModelRegistry::add_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string id = std::filesystem::path(path).stem().string();
  add(id, ss.str());
  return id;
}

std::vector<std::string> ModelRegistry::ids() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, _] : models_) out.push_back(id);
  return out;
}

std::shared_ptr<const Snapshot> ModelRegistry::get(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = models_.find(id);
  return it == models_.end() ? nullptr : it->second;
}

std::shared_ptr<const Snapshot> ModelRegistry::replace(const std::string& id, const std::string& source) {
  auto snap = std::make_shared<const Snapshot>(id, source, horizon_);
  std::lock_guard<std::mutex> lock(mu_);
  models_[id] = snap;
  return snap;
}

}  // namespace roadmap
