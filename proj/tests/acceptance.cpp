// Acceptance suite: one criterion per numbered entry, each backed by a named
// experiment with its pinned default parameters. Prints one pass/fail line
// per criterion and exits nonzero if any criterion fails.
//
// Usage: acceptance [--only K] [--threads T] [--seed S]

#include <chrono>
#include <cstdint>
#include <cstring>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "rrt/experiments.hpp"

namespace {

struct Criterion {
  int number;
  const char* experiment;
  const char* summary;
};

const std::vector<Criterion> kCriteria = {
    {1, "splitting", "exact splitting law of root isolation"},
    {2, "generator-equivalence", "percolation and mutation constructions agree"},
    {3, "root-cluster", "root cluster scales like n^p"},
    {4, "largest-clusters", "largest non-root cluster has the Frechet limit"},
    {5, "coupling", "walk coupling prefix identity and last-passage scalings"},
    {6, "components", "generation-1 components and truncated root mass"},
    {7, "rank-vs-generation", "rank never exceeds generation"},
    {8, "limit-selfchecks", "limit samplers agree with each other"},
    {9, "martingale", "terminal proxy is Exp(1), late path stays close"},
    {10, "joint-marginal", "joint marginal: scaled C_11 approaches Z_11"},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::uint64_t seed = rrt::kDefaultSeed;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
      threads = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      seed = std::strtoull(argv[++i], nullptr, 10);
    } else {
      std::cerr << "usage: acceptance [--only K] [--threads T] [--seed S]\n";
      return 2;
    }
  }

  bool all_pass = true;
  for (const Criterion& criterion : kCriteria) {
    if (only != 0 && criterion.number != only) continue;
    rrt::ExperimentConfig config;
    config.name = criterion.experiment;
    config.seed = seed;
    config.threads = threads;
    const auto start = std::chrono::steady_clock::now();
    rrt::ExperimentReport report;
    try {
      report = rrt::run_replicated(config);
    } catch (const std::exception& e) {
      std::cout << "[FAIL] criterion " << criterion.number << " (" << criterion.experiment
                << "): exception: " << e.what() << "\n";
      all_pass = false;
      continue;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = report.pass();
    all_pass = all_pass && pass;
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion.number << " ("
              << criterion.experiment << "): " << criterion.summary << " [" << secs << "s]\n";
    for (const rrt::CheckRow& row : report.checks) {
      std::cout << "       " << (row.pass ? "ok   " : "FAIL ") << row.label << " = " << row.value
                << " (" << row.requirement << ")\n";
    }
  }
  return all_pass ? 0 : 1;
}
