#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "rrt/destruction.hpp"
#include "rrt/experiments.hpp"
#include "rrt/io.hpp"
#include "rrt/limit.hpp"
#include "rrt/percolation.hpp"
#include "rrt/rng.hpp"
#include "rrt/tree.hpp"
#include "rrt/yule.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitToleranceFailure = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RRTLAB_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return rrt::kDefaultSeed;
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-" || path.empty()) {
    std::cout << content << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (content.empty() || content.back() != '\n') out << '\n';
}

struct CommonOpts {
  std::int64_t n = 10;
  std::uint64_t seed = default_seed();
  std::uint64_t stream = 0;
  std::string out = "-";
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_format = true) {
  cmd->add_option("--n", opts.n, "tree size parameter (vertices 0..n)");
  cmd->add_option("--seed", opts.seed, "RNG seed (default: RRTLAB_SEED or built-in)");
  cmd->add_option("--stream", opts.stream, "RNG stream id");
  cmd->add_option("--out,-o", opts.out, "output path ('-' = stdout)");
  if (with_format) {
    cmd->add_option("--format", opts.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rrtlab: percolation and destruction of random recursive trees"};
  app.require_subcommand(1);

  // generate
  CommonOpts gen_opts;
  std::string gen_format = "json";
  auto* cmd_generate = app.add_subcommand("generate", "sample a random recursive tree");
  add_common(cmd_generate, gen_opts, false);
  cmd_generate->add_option("--format", gen_format, "output format: json or bin")
      ->check(CLI::IsMember({"json", "bin"}));

  // percolate
  CommonOpts perc_opts;
  double perc_p = 0.0;
  double perc_t = 0.0;
  std::string perc_emit = "ctree";
  auto* cmd_percolate =
      app.add_subcommand("percolate", "Bernoulli bond percolation and cluster encodings");
  add_common(cmd_percolate, perc_opts);
  auto* popt = cmd_percolate->add_option("--p", perc_p, "retention probability in (0,1]");
  auto* topt = cmd_percolate->add_option(
      "--t", perc_t, "supercritical parameter: p = 1 - t/ln n");
  popt->excludes(topt);
  topt->excludes(popt);
  cmd_percolate->add_option("--emit", perc_emit, "clusters | ctree | subtree | normalized")
      ->check(CLI::IsMember({"clusters", "ctree", "subtree", "normalized"}));

  // destroy
  CommonOpts destroy_opts;
  std::string destroy_emit = "components";
  double destroy_t = 0.0;
  auto* cmd_destroy =
      app.add_subcommand("destroy", "continuous-time destruction and its encodings");
  add_common(cmd_destroy, destroy_opts);
  cmd_destroy
      ->add_option("--emit", destroy_emit, "components | ranked | cuttree | record | rankgen")
      ->check(CLI::IsMember({"components", "ranked", "cuttree", "record", "rankgen"}));
  cmd_destroy->add_option("--t", destroy_t,
                          "truncation horizon (components/ranked) or pattern time (rankgen)");

  // isolate
  CommonOpts isolate_opts;
  bool isolate_chain = false;
  bool isolate_walk = false;
  auto* cmd_isolate = app.add_subcommand("isolate", "root isolation cut sizes");
  add_common(cmd_isolate, isolate_opts, false);
  cmd_isolate->add_flag("--chain", isolate_chain,
                        "simulate through the splitting law, no tree storage");
  cmd_isolate->add_flag("--walk", isolate_walk, "emit the coupled-walk record");

  // limit
  CommonOpts limit_opts;
  std::string limit_kind = "z";
  std::int64_t limit_depth = 3;
  std::int64_t limit_breadth = 10;
  double limit_t = 1.0;
  auto* cmd_limit = app.add_subcommand("limit", "exact samplers of the limit objects");
  cmd_limit->add_option("--kind", limit_kind, "z | decorated | truncated | g")
      ->check(CLI::IsMember({"z", "decorated", "truncated", "g"}));
  cmd_limit->add_option("--depth", limit_depth, "tree depth");
  cmd_limit->add_option("--breadth", limit_breadth, "children kept per node");
  cmd_limit->add_option("--t", limit_t, "horizon for truncated/g");
  cmd_limit->add_option("--seed", limit_opts.seed, "RNG seed");
  cmd_limit->add_option("--stream", limit_opts.stream, "RNG stream id");
  cmd_limit->add_option("--out,-o", limit_opts.out, "output path");
  cmd_limit->add_option("--format", limit_opts.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // experiment
  std::string exp_name;
  std::string exp_config_path;
  std::string exp_params_inline;
  CommonOpts exp_opts;
  std::int64_t exp_replicates = 0;
  std::int64_t exp_n = 0;
  int exp_threads = 0;
  auto* cmd_experiment =
      app.add_subcommand("experiment", "run a named verification experiment");
  cmd_experiment->add_option("name", exp_name, "experiment name (see --list)");
  cmd_experiment->add_option("--config", exp_config_path,
                             "JSON config file {name, params, seed, base_stream, threads}");
  cmd_experiment->add_option("--params", exp_params_inline, "inline JSON parameter overrides");
  cmd_experiment->add_option("--replicates", exp_replicates, "override replicate count");
  cmd_experiment->add_option("--n", exp_n, "override the size parameter n");
  cmd_experiment->add_option("--threads", exp_threads, "worker cap (0 = hardware)");
  cmd_experiment->add_option("--seed", exp_opts.seed, "RNG seed");
  cmd_experiment->add_option("--stream", exp_opts.stream, "base stream id");
  cmd_experiment->add_option("--out,-o", exp_opts.out, "output path");
  cmd_experiment->add_option("--format", exp_opts.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  bool exp_list = false;
  cmd_experiment->add_flag("--list", exp_list, "list experiment names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadArgs;
  }

  try {
    if (cmd_generate->parsed()) {
      rrt::RngStream rng(gen_opts.seed, gen_opts.stream);
      const rrt::RootedTree tree = rrt::generate_rrt(gen_opts.n, rng);
      if (gen_format == "bin") {
        if (gen_opts.out == "-") throw std::runtime_error("binary output requires --out FILE");
        std::ofstream out(gen_opts.out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + gen_opts.out);
        tree.write_binary(out);
      } else {
        write_output(gen_opts.out, tree.to_json());
      }
      return kExitOk;
    }

    if (cmd_percolate->parsed()) {
      if (popt->count() + topt->count() != 1) {
        std::cerr << "percolate: exactly one of --p / --t is required\n";
        return kExitBadArgs;
      }
      const double p =
          popt->count() ? perc_p : rrt::supercritical_p(perc_opts.n, perc_t);
      rrt::RngStream rng(perc_opts.seed, perc_opts.stream);
      rrt::RngStream gen_rng = rng.substream(0);
      rrt::RngStream perc_rng = rng.substream(1);
      rrt::RngStream tie_rng = rng.substream(2);
      const rrt::RootedTree tree = rrt::generate_rrt(perc_opts.n, gen_rng);
      const rrt::MarkedTree marked = rrt::percolate(tree, p, perc_rng);
      std::string content;
      if (perc_emit == "clusters") {
        nlohmann::json arr = nlohmann::json::array();
        for (const rrt::ClusterInfo& c : rrt::extract_clusters(marked)) {
          arr.push_back({{"root", c.root_vertex},
                         {"size", c.size},
                         {"generation", c.generation},
                         {"members", c.members}});
        }
        content = arr.dump();
      } else if (perc_emit == "subtree") {
        const auto tree_sizes = rrt::subtree_size_tree(marked, tie_rng);
        content = perc_opts.format == "csv" ? rrt::to_csv(tree_sizes) : rrt::to_json(tree_sizes);
      } else if (perc_emit == "normalized") {
        const auto ct = rrt::cluster_size_tree(marked, tie_rng);
        const auto scaled = rrt::normalize_tree(ct, perc_opts.n, p);
        content = perc_opts.format == "csv" ? rrt::to_csv(scaled) : rrt::to_json(scaled);
      } else {
        const auto ct = rrt::cluster_size_tree(marked, tie_rng);
        content = perc_opts.format == "csv" ? rrt::to_csv(ct) : rrt::to_json(ct);
      }
      write_output(perc_opts.out, content);
      return kExitOk;
    }

    if (cmd_destroy->parsed()) {
      rrt::RngStream rng(destroy_opts.seed, destroy_opts.stream);
      rrt::RngStream gen_rng = rng.substream(0);
      rrt::RngStream clock_rng = rng.substream(1);
      rrt::RngStream tie_rng = rng.substream(2);
      const rrt::RootedTree tree = rrt::generate_rrt(destroy_opts.n, gen_rng);
      const rrt::DestructionRecord rec = rrt::destroy(tree, clock_rng);
      std::string content;
      if (destroy_emit == "record") {
        content = rrt::to_json(rec);
      } else if (destroy_emit == "cuttree") {
        content = rrt::cut_tree(rec).to_json();
      } else if (destroy_emit == "rankgen") {
        if (!(destroy_t > 0.0)) throw std::runtime_error("rankgen requires --t > 0");
        const rrt::RankGenResult res = rrt::rank_and_generation_clusters(rec, destroy_t, tie_rng);
        nlohmann::json j;
        j["frak_c"] = nlohmann::json::parse(rrt::to_json(res.frak_c));
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : res.clusters) {
          arr.push_back({{"root", c.root_vertex},
                         {"size", c.cluster_size},
                         {"rank", c.rank},
                         {"generation", c.generation}});
        }
        j["clusters"] = arr;
        content = j.dump();
      } else {
        rrt::ComponentTree ct = rrt::tree_of_components(rec);
        if (destroy_t > 0.0) ct = rrt::truncate_components(ct, destroy_t);
        if (destroy_emit == "ranked") ct = rrt::rank_component_tree(ct, tie_rng);
        content = destroy_opts.format == "csv" ? rrt::to_csv(ct) : rrt::to_json(ct);
      }
      write_output(destroy_opts.out, content);
      return kExitOk;
    }

    if (cmd_isolate->parsed()) {
      rrt::RngStream rng(isolate_opts.seed, isolate_opts.stream);
      nlohmann::json j;
      if (isolate_walk) {
        const rrt::WalkRecord rec = rrt::im_coupled_walk(isolate_opts.n, rng);
        j = nlohmann::json::parse(rrt::to_json(rec));
      } else {
        std::vector<std::int64_t> cuts;
        if (isolate_chain) {
          cuts = rrt::isolate_root_size_chain(isolate_opts.n, rng);
        } else {
          rrt::RngStream gen_rng = rng.substream(0);
          rrt::RngStream cut_rng = rng.substream(1);
          const rrt::RootedTree tree = rrt::generate_rrt(isolate_opts.n, gen_rng);
          cuts = rrt::isolate_root(tree, cut_rng);
        }
        j["cuts"] = cuts;
        j["x_n"] = cuts.size();
      }
      write_output(isolate_opts.out, j.dump());
      return kExitOk;
    }

    if (cmd_limit->parsed()) {
      rrt::RngStream rng(limit_opts.seed, limit_opts.stream);
      std::string content;
      if (limit_kind == "z") {
        const auto tree = rrt::sample_Z(limit_depth, limit_breadth, rng);
        content = limit_opts.format == "csv" ? rrt::to_csv(tree) : rrt::to_json(tree);
      } else if (limit_kind == "decorated") {
        const auto tree = rrt::sample_Z_with_times(limit_depth, limit_breadth, rng);
        content = limit_opts.format == "csv" ? rrt::to_csv(tree) : rrt::to_json(tree);
      } else if (limit_kind == "truncated") {
        const auto tree = rrt::sample_truncated(limit_t, limit_depth, limit_breadth, rng);
        content =
            limit_opts.format == "csv" ? rrt::to_csv(tree.entries) : rrt::to_json(tree.entries);
      } else {
        const auto tree = rrt::sample_G(limit_t, limit_depth, limit_breadth, rng);
        content = limit_opts.format == "csv" ? rrt::to_csv(tree) : rrt::to_json(tree);
      }
      write_output(limit_opts.out, content);
      return kExitOk;
    }

    if (cmd_experiment->parsed()) {
      if (exp_list) {
        for (const std::string& name : rrt::experiment_names()) std::cout << name << '\n';
        return kExitOk;
      }
      rrt::ExperimentConfig config;
      config.seed = exp_opts.seed;
      config.base_stream = exp_opts.stream;
      config.threads = exp_threads;
      if (!exp_config_path.empty()) {
        std::ifstream in(exp_config_path);
        if (!in) throw std::runtime_error("cannot open config file: " + exp_config_path);
        nlohmann::json j;
        in >> j;
        config.name = j.value("name", exp_name);
        if (j.contains("params")) config.params = j.at("params");
        if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("base_stream")) {
          config.base_stream = j.at("base_stream").get<std::uint64_t>();
        }
        if (j.contains("threads")) config.threads = j.at("threads").get<int>();
      } else {
        config.name = exp_name;
      }
      if (config.name.empty()) {
        std::cerr << "experiment: a name or --config is required\n";
        return kExitBadArgs;
      }
      if (!exp_params_inline.empty()) {
        const auto overrides = nlohmann::json::parse(exp_params_inline);
        for (const auto& [key, value] : overrides.items()) {
          config.params[key] = value;
        }
      }
      if (exp_replicates > 0) config.params["replicates"] = exp_replicates;
      if (exp_n > 0) config.params["n"] = exp_n;

      const rrt::ExperimentReport report = rrt::run_replicated(config);
      write_output(exp_opts.out,
                   exp_opts.format == "csv" ? report.to_csv() : report.to_json().dump(2));
      for (const rrt::CheckRow& row : report.checks) {
        std::cerr << (row.pass ? "[PASS] " : "[FAIL] ") << report.name << ": " << row.label
                  << " = " << row.value << " (" << row.requirement << ")\n";
      }
      return report.pass() ? kExitOk : kExitToleranceFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadArgs;
  }
  return kExitOk;
}
