#pragma once

#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "roadmap/analysis/analysis.hpp"
#include "roadmap/lowering/lowering.hpp"
#include "roadmap/model/model.hpp"

namespace roadmap {

/// An immutable parsed and lowered model plus a cache of its sweeps.
class Snapshot {
public:
  /// Throws ModelError when the source does not parse, validate or type.
  Snapshot(std::string id, std::string source, SweepOptions horizon = default_sweep_options());

  const std::string& id() const { return id_; }
  const Model& model() const { return model_; }
  const ConstraintSystem& constraints() const { return cs_; }
  const SweepOptions& horizon() const { return horizon_; }

  /// Computed once per (from, to, step); concurrent callers share the work.
  std::shared_ptr<const Sweep> sweep(long long from, long long to, int step) const;
  std::shared_ptr<const Sweep> horizon_sweep() const;

private:
  std::string id_;
  Model model_;
  ConstraintSystem cs_;
  SweepOptions horizon_;
  mutable std::mutex mu_;
  mutable std::map<std::tuple<long long, long long, int>, std::shared_future<std::shared_ptr<const Sweep>>> sweeps_;
};

/// The models a service exposes. Replacing a model swaps its snapshot in
/// one step, so readers see either the old or the new version.
class ModelRegistry {
public:
  /// Throws ModelError.
  void add(const std::string& id, const std::string& source);
  /// Reads a file; the id is the file name without extension.
  std::string add_file(const std::string& path);

  std::vector<std::string> ids() const;
  std::shared_ptr<const Snapshot> get(const std::string& id) const;
  /// Throws ModelError and leaves the old snapshot in place on failure.
  std::shared_ptr<const Snapshot> replace(const std::string& id, const std::string& source);

  void set_horizon(const SweepOptions& h) { horizon_ = h; }

private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<const Snapshot>> models_;
  SweepOptions horizon_ = default_sweep_options();
};

}  // namespace roadmap
