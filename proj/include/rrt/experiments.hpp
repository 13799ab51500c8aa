#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "rrt/rng.hpp"

namespace rrt {

inline constexpr std::uint64_t kDefaultSeed = 7;

// Declarative experiment run: a registered name, parameter overrides over the
// experiment's pinned defaults, and the seed/stream window the replicates draw
// from. Replicate r of grid entry g uses stream_id base_stream + g*2^40 + r.
struct ExperimentConfig {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t base_stream = 0;
  int threads = 1;  // 0 = hardware concurrency
};

struct CheckRow {
  std::string label;
  double value = 0.0;
  std::string requirement;
  bool pass = false;
};

// Everything in the report is reproducible from (name, parameters, seed,
// base_stream); no wall-clock data is stored, so identical configs give
// byte-identical serializations.
struct ExperimentReport {
  std::string name;
  nlohmann::json parameters;
  std::uint64_t seed = 0;
  std::uint64_t base_stream = 0;
  std::vector<CheckRow> checks;

  bool pass() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

std::vector<std::string> experiment_names();

ExperimentReport run_replicated(const ExperimentConfig& config);

}  // namespace rrt
