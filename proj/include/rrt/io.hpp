#pragma once

#include <string>

#include "rrt/destruction.hpp"
#include "rrt/limit.hpp"
#include "rrt/percolation.hpp"
#include "rrt/uindex.hpp"
#include "rrt/yule.hpp"

namespace rrt {

// JSON object keyed by dot-joined paths ("" is the root); scalar values for
// size/value trees, [size, birth] pairs for component trees and [mass, time]
// pairs for decorated limit trees.
std::string to_json(const IndexedTree<std::int64_t>& tree);
std::string to_json(const IndexedTree<double>& tree);
std::string to_json(const ComponentTree& tree);
std::string to_json(const IndexedTree<Decorated>& tree);

IndexedTree<std::int64_t> int_tree_from_json(const std::string& text);
IndexedTree<double> real_tree_from_json(const std::string& text);

// CSV schemas: (path, level, value) for value trees, (path, size, birth) for
// component trees, (path, level, mass, time) for decorated trees.
std::string to_csv(const IndexedTree<std::int64_t>& tree);
std::string to_csv(const IndexedTree<double>& tree);
std::string to_csv(const ComponentTree& tree);
std::string to_csv(const IndexedTree<Decorated>& tree);

std::string to_json(const MarkedTree& marked);
MarkedTree marked_tree_from_json(const std::string& text);

// MarkedTree fields plus "birth_times" and "rho_n".
std::string to_json(const MutationGenealogy& g);

std::string to_json(const WalkRecord& rec);

std::string to_json(const DestructionRecord& rec);

}  // namespace rrt
