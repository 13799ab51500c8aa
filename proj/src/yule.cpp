#include "rrt/yule.hpp"

#include <cmath>
#include <stdexcept>

namespace rrt {

MutationGenealogy simulate_yule_mutations(std::int64_t n, double p, RngStream& rng) {
  if (n < 0) throw std::invalid_argument("simulate_yule_mutations: n must be >= 0");
  if (!(p > 0.0) || p > 1.0) {
    throw std::invalid_argument("simulate_yule_mutations: p must lie in (0,1]");
  }
  const double q = 1.0 - p;

  std::vector<Vertex> parent(static_cast<std::size_t>(n));
  std::vector<std::uint8_t> mutant(static_cast<std::size_t>(n));
  std::vector<double> birth(static_cast<std::size_t>(n) + 1, 0.0);

  // Per-type bookkeeping in creation order; type 0 is the ancestral type.
  std::vector<std::int32_t> type_parent{-1};
  std::vector<std::uint32_t> type_index{0};
  std::vector<double> type_birth_time{0.0};
  std::vector<std::int64_t> type_size{1};
  std::vector<std::uint32_t> type_children{0};
  std::vector<std::int32_t> type_of(static_cast<std::size_t>(n) + 1, 0);

  for (std::int64_t j = 1; j <= n; ++j) {
    const auto a = static_cast<Vertex>(rng.next_below(static_cast<std::uint64_t>(j)));
    const bool is_mutant = rng.next_bernoulli(q);
    birth[static_cast<std::size_t>(j)] =
        birth[static_cast<std::size_t>(j - 1)] +
        rng.next_exponential(static_cast<double>(j));
    parent[static_cast<std::size_t>(j - 1)] = a;
    mutant[static_cast<std::size_t>(j - 1)] = is_mutant ? 1 : 0;
    const std::int32_t parent_type = type_of[static_cast<std::size_t>(a)];
    if (is_mutant) {
      const auto t = static_cast<std::int32_t>(type_parent.size());
      type_parent.push_back(parent_type);
      type_index.push_back(++type_children[static_cast<std::size_t>(parent_type)]);
      type_birth_time.push_back(birth[static_cast<std::size_t>(j)]);
      type_size.push_back(1);
      type_children.push_back(0);
      type_of[static_cast<std::size_t>(j)] = t;
    } else {
      type_of[static_cast<std::size_t>(j)] = parent_type;
      ++type_size[static_cast<std::size_t>(parent_type)];
    }
  }

  MutationGenealogy g;
  g.tree = RootedTree(std::move(parent));
  g.mutant = std::move(mutant);
  g.rho_n = birth[static_cast<std::size_t>(n)];
  g.birth_times = std::move(birth);
  g.retention = p;

  // Creation order guarantees a type's parent address exists first.
  std::vector<UIndex> address(type_parent.size());
  for (std::size_t t = 0; t < type_parent.size(); ++t) {
    if (type_parent[t] >= 0) {
      address[t] = address[static_cast<std::size_t>(type_parent[t])].child(type_index[t]);
    }
    g.type_sizes.set(address[t], type_size[t]);
    g.type_birth.set(address[t], type_birth_time[t]);
  }
  return g;
}

double martingale_terminal_proxy(const MutationGenealogy& g) {
  const std::int64_t n = g.tree.n_edges();
  if (n < 1) throw std::invalid_argument("martingale_terminal_proxy: n must be >= 1");
  return std::exp(-g.rho_n) * static_cast<double>(n + 1);
}

double geometric_yule_marginal(double p, double u, std::int64_t k) {
  if (k < 1) throw std::invalid_argument("geometric_yule_marginal: k must be >= 1");
  if (u < 0.0) throw std::invalid_argument("geometric_yule_marginal: u must be >= 0");
  const double param = std::exp(-p * u);
  return param * std::pow(1.0 - param, static_cast<double>(k - 1));
}

MartingalePath martingale_path(const MutationGenealogy& g) {
  MartingalePath path;
  const std::size_t count = g.birth_times.size();
  path.times = g.birth_times;
  path.values.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    path.values[j] = std::exp(-g.birth_times[j]) * static_cast<double>(j + 1);
  }
  return path;
}

std::vector<double> yule_birth_times(std::int64_t n, RngStream& rng) {
  if (n < 0) throw std::invalid_argument("yule_birth_times: n must be >= 0");
  std::vector<double> birth(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::int64_t j = 1; j <= n; ++j) {
    birth[static_cast<std::size_t>(j)] =
        birth[static_cast<std::size_t>(j - 1)] + rng.next_exponential(static_cast<double>(j));
  }
  return birth;
}

}  // namespace rrt
