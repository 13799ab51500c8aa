#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rrt {

// Address in the universal tree: a finite sequence of integers >= 1. The empty
// sequence is the root; the length of the sequence is the level (generation).
class UIndex {
 public:
  UIndex() = default;
  explicit UIndex(std::vector<std::uint32_t> path) : path_(std::move(path)) {
    for (std::uint32_t e : path_) {
      if (e == 0) throw std::invalid_argument("UIndex: entries must be >= 1");
    }
  }

  static UIndex root() { return UIndex{}; }

  std::size_t level() const { return path_.size(); }
  bool is_root() const { return path_.empty(); }
  const std::vector<std::uint32_t>& path() const { return path_; }

  UIndex child(std::uint32_t j) const {
    if (j == 0) throw std::invalid_argument("UIndex::child: index must be >= 1");
    std::vector<std::uint32_t> p = path_;
    p.push_back(j);
    return UIndex(std::move(p));
  }

  UIndex parent() const {
    if (is_root()) throw std::invalid_argument("UIndex::parent: root has no parent");
    std::vector<std::uint32_t> p(path_.begin(), path_.end() - 1);
    return UIndex(std::move(p));
  }

  std::uint32_t last() const {
    if (is_root()) throw std::invalid_argument("UIndex::last: root");
    return path_.back();
  }

  // Dot-joined path; the root is the empty string.
  std::string to_string() const {
    std::ostringstream oss;
    for (std::size_t i = 0; i < path_.size(); ++i) {
      if (i > 0) oss << '.';
      oss << path_[i];
    }
    return oss.str();
  }

  static UIndex parse(const std::string& text) {
    if (text.empty()) return UIndex{};
    std::vector<std::uint32_t> p;
    std::istringstream iss(text);
    std::string tok;
    while (std::getline(iss, tok, '.')) {
      if (tok.empty()) throw std::invalid_argument("UIndex::parse: empty path component");
      p.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    }
    return UIndex(std::move(p));
  }

  // Lexicographic order; equals depth-first preorder of the universal tree.
  friend bool operator<(const UIndex& a, const UIndex& b) { return a.path_ < b.path_; }
  friend bool operator==(const UIndex& a, const UIndex& b) { return a.path_ == b.path_; }
  friend bool operator!=(const UIndex& a, const UIndex& b) { return !(a == b); }

 private:
  std::vector<std::uint32_t> path_;
};

// Sparse map from UIndex to values. Absent addresses encode zero/absent. Keys
// iterate in address-lexicographic order, which downstream code relies on for
// deterministic randomized tie-breaking.
template <typename T>
class IndexedTree {
 public:
  using Map = std::map<UIndex, T>;
  using const_iterator = typename Map::const_iterator;

  bool contains(const UIndex& u) const { return entries_.count(u) > 0; }

  const T* find(const UIndex& u) const {
    auto it = entries_.find(u);
    return it == entries_.end() ? nullptr : &it->second;
  }

  const T& at(const UIndex& u) const {
    auto it = entries_.find(u);
    if (it == entries_.end()) throw std::out_of_range("IndexedTree: no entry at " + u.to_string());
    return it->second;
  }

  void set(const UIndex& u, T value) { entries_[u] = std::move(value); }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }

  // Number of children present at u; children occupy consecutive indices 1..l.
  std::uint32_t child_count(const UIndex& u) const {
    std::uint32_t c = 0;
    while (contains(u.child(c + 1))) ++c;
    return c;
  }

  // Prefix closure plus gap-free child indexing.
  bool valid_shape() const {
    for (const auto& [u, v] : entries_) {
      if (u.is_root()) continue;
      if (!contains(u.parent())) return false;
      if (u.last() > 1 && !contains(u.parent().child(u.last() - 1))) return false;
    }
    return !entries_.empty() ? contains(UIndex::root()) : true;
  }

 private:
  Map entries_;
};

}  // namespace rrt
