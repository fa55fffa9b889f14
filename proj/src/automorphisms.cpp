#include "antipodal/automorphisms.hpp"

#include <algorithm>

#include "antipodal/error.hpp"

namespace antipodal {
namespace {

class IsomorphismSearch {
 public:
  IsomorphismSearch(const Graph& g, const SearchConstraints& c,
                    const std::function<bool(const Permutation&)>& visit)
      : g_(g), c_(c), visit_(visit), image_(g.size(), PartialMap::kUnmapped),
        used_(g.size(), false) {}

  void run() { descend(0); }

 private:
  Vertex fn(Vertex v) const {
    return c_.function.empty() ? PartialMap::kUnmapped : c_.function[v];
  }

  bool admissible(Vertex v, Vertex t) const {
    if (used_[t]) return false;
    if (c_.compatible && !c_.compatible(v, t)) return false;
    if (!c_.function.empty()) {
      if ((fn(v) == PartialMap::kUnmapped) != (fn(t) == PartialMap::kUnmapped)) return false;
      if (fn(v) == v && fn(t) != t) return false;
    }
    for (Vertex u = 0; u < v; ++u) {
      if (g_.dist(u, v) != g_.dist(image_[u], t)) return false;
      if (!c_.function.empty()) {
        if (fn(u) == v && fn(image_[u]) != t) return false;
        if (fn(v) == u && fn(t) != image_[u]) return false;
      }
    }
    return true;
  }

  // Returns false when the visitor asked to stop.
  bool descend(Vertex v) {
    const int n = g_.size();
    if (v == n) return visit_(image_);
    const bool pinned = c_.fixed != nullptr && c_.fixed->defined(v);
    for (Vertex t = pinned ? (*c_.fixed)(v) : 0; t < n; ++t) {
      if (admissible(v, t)) {
        image_[v] = t;
        used_[t] = true;
        const bool keep_going = descend(v + 1);
        used_[t] = false;
        image_[v] = PartialMap::kUnmapped;
        if (!keep_going) return false;
      }
      if (pinned) break;
    }
    return true;
  }

  const Graph& g_;
  const SearchConstraints& c_;
  const std::function<bool(const Permutation&)>& visit_;
  Permutation image_;
  std::vector<bool> used_;
};

}  // namespace

void for_each_automorphism(const Graph& g, const SearchConstraints& constraints,
                           const std::function<bool(const Permutation&)>& visit,
                           int max_vertices) {
  if (g.size() > max_vertices) {
    throw SizeLimitError("automorphism enumeration refused for " + std::to_string(g.size()) +
                             " vertices",
                         max_vertices);
  }
  if (!constraints.function.empty() &&
      static_cast<int>(constraints.function.size()) != g.size()) {
    throw InputError("unary function size does not match the graph");
  }
  IsomorphismSearch(g, constraints, visit).run();
}

std::vector<Permutation> automorphisms(const Graph& g, int max_vertices) {
  std::vector<Permutation> out;
  for_each_automorphism(g, {}, [&](const Permutation& p) {
    out.push_back(p);
    return true;
  }, max_vertices);
  return out;
}

std::optional<Permutation> least_extension(const Graph& g, const PartialMap& partial,
                                           const SearchConstraints& extra) {
  if (partial.host_size() != g.size()) throw InputError("partial map does not match the graph");
  std::optional<Permutation> found;
  SearchConstraints c = extra;
  c.fixed = &partial;
  for_each_automorphism(g, c, [&](const Permutation& p) {
    found = p;
    return false;
  });
  return found;
}

std::vector<Vertex> closure(std::span<const Vertex> function, std::span<const Vertex> seeds) {
  std::vector<bool> in(function.size(), false);
  std::vector<Vertex> stack(seeds.begin(), seeds.end());
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    if (v < 0 || v >= static_cast<Vertex>(function.size())) {
      throw InputError("closure seed out of range");
    }
    if (in[v]) continue;
    in[v] = true;
    if (function[v] != PartialMap::kUnmapped) stack.push_back(function[v]);
  }
  std::vector<Vertex> out;
  for (Vertex v = 0; v < static_cast<Vertex>(in.size()); ++v) {
    if (in[v]) out.push_back(v);
  }
  return out;
}

PartialAutomorphismCursor::PartialAutomorphismCursor(const Graph& g)
    : graph_(&g), choice_(g.size(), PartialMap::kUnmapped), used_(g.size(), false),
      current_(g.size()) {}

bool PartialAutomorphismCursor::consistent(int level, Vertex target) const {
  for (int l = 0; l < level; ++l) {
    if (choice_[l] == PartialMap::kUnmapped) continue;
    if (graph_->dist(l, level) != graph_->dist(choice_[l], target)) return false;
  }
  return true;
}

bool PartialAutomorphismCursor::next() {
  if (done_) return false;
  const int n = graph_->size();
  if (!started_) {
    started_ = true;
    return true;  // the empty map
  }
  for (int level = n - 1; level >= 0; --level) {
    Vertex from = choice_[level] + 1;
    if (choice_[level] != PartialMap::kUnmapped) used_[choice_[level]] = false;
    choice_[level] = PartialMap::kUnmapped;
    current_.erase(level);
    for (Vertex t = from; t < n; ++t) {
      if (!used_[t] && consistent(level, t)) {
        choice_[level] = t;
        used_[t] = true;
        current_.set(level, t);
        return true;  // deeper levels are already reset to unmapped
      }
    }
  }
  done_ = true;
  return false;
}

}  // namespace antipodal
