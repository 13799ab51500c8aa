#include <stdexcept>

#include "doctest.h"
#include "rrt/experiments.hpp"

using rrt::ExperimentConfig;
using rrt::ExperimentReport;

TEST_SUITE_BEGIN("experiments");

TEST_CASE("unknown names and degenerate configs are rejected") {
  ExperimentConfig config;
  config.name = "no-such-experiment";
  CHECK_THROWS_AS(rrt::run_replicated(config), std::invalid_argument);

  config.name = "splitting";
  config.params["replicates"] = 0;
  CHECK_THROWS_AS(rrt::run_replicated(config), std::invalid_argument);
}

TEST_CASE("the registry lists the named experiments") {
  const auto names = rrt::experiment_names();
  for (const char* expected :
       {"splitting", "generator-equivalence", "root-cluster", "largest-clusters", "coupling",
        "components", "rank-vs-generation", "limit-selfchecks", "martingale", "joint-marginal"}) {
    CHECK(std::find(names.begin(), names.end(), expected) != names.end());
  }
}

TEST_CASE("identical configs produce byte-identical reports") {
  ExperimentConfig config;
  config.name = "splitting";
  config.params["n"] = 30;
  config.params["replicates"] = 20000;
  config.params["cells"] = 20;
  config.params["chi2_bound"] = 46.797;  // 99.9% quantile, 21 cells - 1 dof
  config.seed = 7;
  config.threads = 1;
  const ExperimentReport a = rrt::run_replicated(config);
  const ExperimentReport b = rrt::run_replicated(config);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.pass());

  // Thread count must not change the result.
  config.threads = 2;
  const ExperimentReport c = rrt::run_replicated(config);
  CHECK(a.to_json().dump() == c.to_json().dump());
}

TEST_CASE("reports carry rows, parameters and seeds") {
  ExperimentConfig config;
  config.name = "coupling";
  config.params["prefix_n"] = 500;
  config.params["prefix_seeds"] = 300;
  config.params["big_n"] = 20000;
  config.params["big_replicates"] = 100;
  config.seed = 11;
  config.base_stream = 99;
  const ExperimentReport report = rrt::run_replicated(config);
  CHECK(report.name == "coupling");
  CHECK(report.seed == 11);
  CHECK(report.base_stream == 99);
  CHECK(report.checks.size() == 4);
  const auto j = report.to_json();
  CHECK(j.at("checks").size() == 4);
  CHECK(report.to_csv().rfind("label,value,requirement,pass\n", 0) == 0);
}

TEST_SUITE_END();
