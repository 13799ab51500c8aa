#include "rrt/io.hpp"

#include <charconv>
#include <sstream>

#include "json.hpp"

namespace rrt {

namespace {

// Shortest round-trip formatting for CSV doubles.
std::string fmt(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string to_json(const IndexedTree<std::int64_t>& tree) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [u, v] : tree) j[u.to_string()] = v;
  return j.dump();
}

std::string to_json(const IndexedTree<double>& tree) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [u, v] : tree) j[u.to_string()] = v;
  return j.dump();
}

std::string to_json(const ComponentTree& tree) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [u, v] : tree) j[u.to_string()] = nlohmann::json::array({v.size, v.birth});
  return j.dump();
}

std::string to_json(const IndexedTree<Decorated>& tree) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [u, v] : tree) j[u.to_string()] = nlohmann::json::array({v.mass, v.time});
  return j.dump();
}

IndexedTree<std::int64_t> int_tree_from_json(const std::string& text) {
  IndexedTree<std::int64_t> out;
  const auto parsed = nlohmann::json::parse(text);
  for (const auto& [key, value] : parsed.items()) {
    out.set(UIndex::parse(key), value.get<std::int64_t>());
  }
  return out;
}

IndexedTree<double> real_tree_from_json(const std::string& text) {
  IndexedTree<double> out;
  const auto parsed = nlohmann::json::parse(text);
  for (const auto& [key, value] : parsed.items()) {
    out.set(UIndex::parse(key), value.get<double>());
  }
  return out;
}

std::string to_csv(const IndexedTree<std::int64_t>& tree) {
  std::ostringstream oss;
  oss << "path,level,value\n";
  for (const auto& [u, v] : tree) oss << u.to_string() << ',' << u.level() << ',' << v << '\n';
  return oss.str();
}

std::string to_csv(const IndexedTree<double>& tree) {
  std::ostringstream oss;
  oss << "path,level,value\n";
  for (const auto& [u, v] : tree) {
    oss << u.to_string() << ',' << u.level() << ',' << fmt(v) << '\n';
  }
  return oss.str();
}

std::string to_csv(const ComponentTree& tree) {
  std::ostringstream oss;
  oss << "path,size,birth\n";
  for (const auto& [u, v] : tree) {
    oss << u.to_string() << ',' << v.size << ',' << fmt(v.birth) << '\n';
  }
  return oss.str();
}

std::string to_csv(const IndexedTree<Decorated>& tree) {
  std::ostringstream oss;
  oss << "path,level,mass,time\n";
  for (const auto& [u, v] : tree) {
    oss << u.to_string() << ',' << u.level() << ',' << fmt(v.mass) << ',' << fmt(v.time) << '\n';
  }
  return oss.str();
}

std::string to_json(const MarkedTree& marked) {
  nlohmann::json j;
  j["n"] = marked.tree().n_edges();
  j["parent"] = marked.tree().parents();
  j["marks"] = marked.marks();
  j["p"] = marked.retention();
  return j.dump();
}

MarkedTree marked_tree_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  RootedTree tree(j.at("parent").get<std::vector<Vertex>>());
  std::vector<std::uint8_t> marked(static_cast<std::size_t>(tree.n_edges()), 0);
  for (Vertex e : j.at("marks").get<std::vector<Vertex>>()) {
    marked.at(static_cast<std::size_t>(e) - 1) = 1;
  }
  return MarkedTree(std::move(tree), std::move(marked), j.at("p").get<double>());
}

std::string to_json(const MutationGenealogy& g) {
  nlohmann::json j;
  j["n"] = g.tree.n_edges();
  j["parent"] = g.tree.parents();
  std::vector<Vertex> marks;
  for (std::size_t i = 0; i < g.mutant.size(); ++i) {
    if (g.mutant[i]) marks.push_back(static_cast<Vertex>(i + 1));
  }
  j["marks"] = marks;
  j["p"] = g.retention;
  j["birth_times"] = g.birth_times;
  j["rho_n"] = g.rho_n;
  return j.dump();
}

std::string to_json(const WalkRecord& rec) {
  nlohmann::json j;
  j["xi"] = rec.xi;
  j["partial_sums"] = rec.partial_sums;
  j["l_n"] = rec.l_n;
  j["cut_sizes"] = rec.cut_sizes;
  j["x_n"] = rec.x_n;
  return j.dump();
}

std::string to_json(const DestructionRecord& rec) {
  nlohmann::json j;
  j["n"] = rec.tree.n_edges();
  j["parent"] = rec.tree.parents();
  j["removal_time"] = rec.removal_time;
  j["removal_order"] = rec.removal_order;
  return j.dump();
}

}  // namespace rrt
