#pragma once

#include <cstdint>
#include <vector>

#include "rrt/rng.hpp"
#include "rrt/uindex.hpp"

namespace rrt {

// The k largest atoms of a Poisson random measure on (0,infinity) with
// intensity mass * a^-2 da: mass/Gamma_1 > mass/Gamma_2 > ... where Gamma_j
// are the arrival times of a unit-rate Poisson process. The top-k marginal is
// exact. Throws on a floating-point tie (probability zero).
std::vector<double> prm_ranked_atoms(double mass, std::int64_t k, RngStream& rng);

// Genealogy of the discrete-time CSBP with reproduction measure a^-2 da,
// started from mass 1: children of a node of mass m are the ranked atoms for
// mass m, kept to depth `depth` and breadth `breadth`.
IndexedTree<double> sample_Z(std::int64_t depth, std::int64_t breadth, RngStream& rng);

struct Decorated {
  double mass = 0.0;
  double time = 0.0;
  bool operator==(const Decorated&) const = default;
};

// Z decorated with birth times: the time of a child is its parent's time plus
// an independent standard exponential, drawn from a stream disjoint from the
// mass stream.
IndexedTree<Decorated> sample_Z_with_times(std::int64_t depth, std::int64_t breadth,
                                           RngStream& rng);

struct TruncatedLimitTree {
  IndexedTree<Decorated> entries;
  double horizon = 0.0;
};

// Direct sampler of the time-truncated tree: children of a node (m, z) are
// the ranked atoms of a Poisson measure on (0,infinity) x (0, t-z) with
// intensity m a^-2 da (x) e^-r dr.
TruncatedLimitTree sample_truncated(double t, std::int64_t depth, std::int64_t breadth,
                                    RngStream& rng);

// Largest surviving level-1 atom by the squeeze-out construction: draw pairs
// (1/Gamma_j, e_j) and keep the first one with e_j < t. Same law as the
// first child of sample_truncated.
Decorated squeeze_out_level1(double t, RngStream& rng);

// The transformed tree G_u = t^-|u| exp(z_u,t) Z_u,t with children of every
// node re-ranked decreasingly. Atom generation at each node is extended
// adaptively until no further atom can enter the top `breadth`, so the
// returned top-k is exact.
IndexedTree<double> sample_G(double t, std::int64_t depth, std::int64_t breadth, RngStream& rng);

}  // namespace rrt
