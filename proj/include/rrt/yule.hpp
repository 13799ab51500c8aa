#pragma once

#include <cstdint>
#include <vector>

#include "rrt/rng.hpp"
#include "rrt/tree.hpp"
#include "rrt/uindex.hpp"

namespace rrt {

// State of the Yule population with neutral mutations at the instant the
// (n+1)-th individual is born. Vertex j is a mutant iff edge j carries a
// mutation mark; types are addressed by the universal tree, the j-th mutant
// born inside type u founding type u.j.
struct MutationGenealogy {
  RootedTree tree;
  std::vector<std::uint8_t> mutant;      // per edge, 1 = mutation at birth of j
  std::vector<double> birth_times;       // per vertex, strictly increasing, [0] = 0
  IndexedTree<std::int64_t> type_sizes;  // subpopulation sizes at rho_n
  IndexedTree<double> type_birth;        // birth time of each type's founder
  double rho_n = 0.0;
  double retention = 1.0;                // clone probability p
};

// Discrete skeleton (uniform attachment, mutation with probability 1-p) plus
// the embedded continuous clock: the gap after the j-th birth is Exp(j).
MutationGenealogy simulate_yule_mutations(std::int64_t n, double p, RngStream& rng);

// e^{-rho_n} (n+1): the simulation-accessible stand-in for the martingale
// terminal value W(infinity).
double martingale_terminal_proxy(const MutationGenealogy& g);

// P(size = k) for a rate-p Yule population at age u started from one
// individual: geometric with parameter e^{-pu}.
double geometric_yule_marginal(double p, double u, std::int64_t k);

// W(t) = e^{-t} Z(t) sampled at the birth events.
struct MartingalePath {
  std::vector<double> times;   // birth instants, ascending
  std::vector<double> values;  // W immediately after each birth
};

MartingalePath martingale_path(const MutationGenealogy& g);

// Birth instants of a standard Yule process run to population n+1, without
// genealogy bookkeeping. Same law as MutationGenealogy::birth_times.
std::vector<double> yule_birth_times(std::int64_t n, RngStream& rng);

}  // namespace rrt
