#include "rrt/limit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rrt {

namespace {

[[noreturn]] void tie_failure() {
  throw std::runtime_error("limit sampler: floating-point tie between ranked atoms");
}

}  // namespace

std::vector<double> prm_ranked_atoms(double mass, std::int64_t k, RngStream& rng) {
  if (!(mass > 0.0)) throw std::invalid_argument("prm_ranked_atoms: mass must be positive");
  if (k < 1) throw std::invalid_argument("prm_ranked_atoms: k must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(k));
  double gamma = 0.0;
  for (std::int64_t j = 0; j < k; ++j) {
    const double prev = gamma;
    gamma += rng.next_exponential();
    if (gamma == prev) tie_failure();
    out[static_cast<std::size_t>(j)] = mass / gamma;
  }
  return out;
}

IndexedTree<double> sample_Z(std::int64_t depth, std::int64_t breadth, RngStream& rng) {
  if (depth < 0) throw std::invalid_argument("sample_Z: depth must be >= 0");
  if (breadth < 1) throw std::invalid_argument("sample_Z: breadth must be >= 1");
  IndexedTree<double> out;
  struct Item {
    UIndex address;
    double mass;
  };
  // Preorder stack; atom randomness is consumed in address-lex order.
  std::vector<Item> stack{{UIndex::root(), 1.0}};
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    out.set(item.address, item.mass);
    if (item.address.level() >= static_cast<std::size_t>(depth)) continue;
    const std::vector<double> atoms = prm_ranked_atoms(item.mass, breadth, rng);
    for (std::size_t j = atoms.size(); j-- > 0;) {
      stack.push_back({item.address.child(static_cast<std::uint32_t>(j + 1)), atoms[j]});
    }
  }
  return out;
}

IndexedTree<Decorated> sample_Z_with_times(std::int64_t depth, std::int64_t breadth,
                                           RngStream& rng) {
  // Disjoint streams keep the time decoration independent of the masses.
  RngStream mass_rng = rng.substream(0);
  RngStream time_rng = rng.substream(1);
  const IndexedTree<double> z = sample_Z(depth, breadth, mass_rng);
  IndexedTree<Decorated> out;
  for (const auto& [u, mass] : z) {
    const double parent_time = u.is_root() ? 0.0 : out.at(u.parent()).time;
    const double time = u.is_root() ? 0.0 : parent_time + time_rng.next_exponential();
    out.set(u, Decorated{mass, time});
  }
  return out;
}

TruncatedLimitTree sample_truncated(double t, std::int64_t depth, std::int64_t breadth,
                                    RngStream& rng) {
  if (!(t > 0.0)) throw std::invalid_argument("sample_truncated: t must be positive");
  if (depth < 0 || breadth < 1) {
    throw std::invalid_argument("sample_truncated: invalid depth or breadth");
  }
  RngStream mass_rng = rng.substream(0);
  RngStream time_rng = rng.substream(1);
  TruncatedLimitTree out;
  out.horizon = t;
  struct Item {
    UIndex address;
    Decorated value;
  };
  std::vector<Item> stack{{UIndex::root(), Decorated{1.0, 0.0}}};
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    out.entries.set(item.address, item.value);
    if (item.address.level() >= static_cast<std::size_t>(depth)) continue;
    const double window = t - item.value.time;
    const double weight = -std::expm1(-window);  // 1 - e^{-window}
    // a-marginal of the product intensity integrates the time factor.
    const std::vector<double> atoms =
        prm_ranked_atoms(item.value.mass * weight, breadth, mass_rng);
    for (std::size_t j = atoms.size(); j-- > 0;) {
      // Inverse CDF of the exponential truncated to (0, window).
      double v;
      do {
        v = time_rng.next_double();
      } while (v == 0.0);
      const double r = -std::log1p(-v * weight);
      stack.push_back({item.address.child(static_cast<std::uint32_t>(j + 1)),
                       Decorated{atoms[j], item.value.time + r}});
    }
  }
  return out;
}

Decorated squeeze_out_level1(double t, RngStream& rng) {
  if (!(t > 0.0)) throw std::invalid_argument("squeeze_out_level1: t must be positive");
  RngStream mass_rng = rng.substream(0);
  RngStream time_rng = rng.substream(1);
  double gamma = 0.0;
  for (;;) {
    gamma += mass_rng.next_exponential();
    const double z = time_rng.next_exponential();
    if (z < t) return Decorated{1.0 / gamma, z};
  }
}

IndexedTree<double> sample_G(double t, std::int64_t depth, std::int64_t breadth, RngStream& rng) {
  if (!(t > 0.0)) throw std::invalid_argument("sample_G: t must be positive");
  if (depth < 0 || breadth < 1) throw std::invalid_argument("sample_G: invalid depth or breadth");
  RngStream mass_rng = rng.substream(0);
  RngStream time_rng = rng.substream(1);

  IndexedTree<double> out;
  struct Item {
    UIndex address;
    Decorated value;  // (Z_{u,t}, z_{u,t})
    double g;
  };
  std::vector<Item> stack{{UIndex::root(), Decorated{1.0, 0.0}, 1.0}};
  const double inv_t = 1.0 / t;
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    out.set(item.address, item.g);
    if (item.address.level() >= static_cast<std::size_t>(depth)) continue;

    const double window = t - item.value.time;
    const double weight = -std::expm1(-window);
    const double mass = item.value.mass * weight;
    const double level_scale = std::pow(inv_t, static_cast<double>(item.address.level() + 1));
    const double base = level_scale * std::exp(item.value.time);

    // Draw atoms until no later atom can still enter the top `breadth` by G
    // value: later atoms have a < mass/gamma and e^r < e^window.
    struct Child {
      Decorated value;
      double g;
    };
    std::vector<Child> kept;
    double gamma = 0.0;
    for (;;) {
      const double prev = gamma;
      gamma += mass_rng.next_exponential();
      if (gamma == prev) tie_failure();
      const double a = mass / gamma;
      double v;
      do {
        v = time_rng.next_double();
      } while (v == 0.0);
      const double r = -std::log1p(-v * weight);
      const double g = base * std::exp(r) * a;
      Child child{Decorated{a, item.value.time + r}, g};
      auto pos = std::lower_bound(kept.begin(), kept.end(), child,
                                  [](const Child& x, const Child& y) { return x.g > y.g; });
      if (pos != kept.end() && pos->g == child.g) tie_failure();
      if (static_cast<std::int64_t>(kept.size()) < breadth ||
          pos != kept.end()) {
        kept.insert(pos, std::move(child));
        if (static_cast<std::int64_t>(kept.size()) > breadth) kept.pop_back();
      }
      if (static_cast<std::int64_t>(kept.size()) == breadth &&
          base * std::exp(window) * (mass / gamma) < kept.back().g) {
        break;
      }
    }
    for (std::size_t j = kept.size(); j-- > 0;) {
      stack.push_back({item.address.child(static_cast<std::uint32_t>(j + 1)), kept[j].value,
                       kept[j].g});
    }
  }
  return out;
}

}  // namespace rrt
