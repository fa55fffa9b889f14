#include "antipodal/graph.hpp"

#include <algorithm>

#include "antipodal/error.hpp"

namespace antipodal {

std::optional<Vertex> Graph::find(std::string_view name) const {
  for (Vertex v = 0; v < size(); ++v) {
    if (names_[v] == name) return v;
  }
  return std::nullopt;
}

bool Graph::is_complete() const {
  for (Vertex u = 0; u < size(); ++u) {
    for (Vertex v = u + 1; v < size(); ++v) {
      if (!has_edge(u, v)) return false;
    }
  }
  return true;
}

int Graph::edge_count() const {
  int count = 0;
  for (Vertex u = 0; u < size(); ++u) {
    for (Vertex v = u + 1; v < size(); ++v) count += has_edge(u, v) ? 1 : 0;
  }
  return count;
}

int Graph::max_label() const {
  int best = 0;
  for (int label : dist_) best = std::max(best, label);
  return best;
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (Vertex u = 0; u < size(); ++u) {
    for (Vertex v = u + 1; v < size(); ++v) {
      if (has_edge(u, v)) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph Graph::induced(std::span<const Vertex> vertices) const {
  GraphBuilder builder(delta_);
  for (Vertex v : vertices) builder.add_vertex(names_[v]);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      builder.set(static_cast<Vertex>(i), static_cast<Vertex>(j), dist(vertices[i], vertices[j]));
    }
  }
  return std::move(builder).build();
}

GraphBuilder::GraphBuilder(int delta) {
  if (delta < 1) throw InputError("delta must be positive, got " + std::to_string(delta));
  graph_.delta_ = delta;
}

GraphBuilder::GraphBuilder(Graph base) : graph_(std::move(base)) {}

Vertex GraphBuilder::add_vertex(std::string name) {
  if (name.empty()) throw InputError("vertex names must be non-empty");
  if (graph_.find(name)) throw InputError("duplicate vertex name '" + name + "'");
  const auto old_n = graph_.names_.size();
  const auto n = old_n + 1;
  std::vector<int> grown(n * n, kNoLabel);
  for (std::size_t u = 0; u < old_n; ++u) {
    for (std::size_t v = 0; v < old_n; ++v) grown[u * n + v] = graph_.dist_[u * old_n + v];
  }
  graph_.dist_ = std::move(grown);
  graph_.names_.push_back(std::move(name));
  return static_cast<Vertex>(old_n);
}

Vertex GraphBuilder::add_vertices(int count, std::string_view prefix) {
  Vertex first = graph_.size();
  for (int i = 0; i < count; ++i) add_vertex(std::string(prefix) + std::to_string(first + i));
  return first;
}

GraphBuilder& GraphBuilder::set(Vertex u, Vertex v, int label) {
  const int n = graph_.size();
  if (u < 0 || v < 0 || u >= n || v >= n) throw InputError("vertex index out of range");
  if (u == v) throw InputError("distances from a vertex to itself are not stored");
  if (label < 0 || label > graph_.delta_) {
    throw InputError("label " + std::to_string(label) + " outside {1.." +
                     std::to_string(graph_.delta_) + "} on " + describe_pair(graph_, u, v));
  }
  graph_.dist_[graph_.index(u, v)] = label;
  graph_.dist_[graph_.index(v, u)] = label;
  return *this;
}

GraphBuilder& GraphBuilder::set(std::string_view u, std::string_view v, int label) {
  return set(lookup(u), lookup(v), label);
}

GraphBuilder& GraphBuilder::set_delta(int delta) {
  if (delta < graph_.max_label()) throw InputError("delta below an existing label");
  graph_.delta_ = delta;
  return *this;
}

Vertex GraphBuilder::lookup(std::string_view name) const {
  auto v = graph_.find(name);
  if (!v) throw InputError("unknown vertex '" + std::string(name) + "'");
  return *v;
}

Permutation identity_permutation(int n) {
  Permutation p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  return p;
}

Permutation inverse(const Permutation& p) {
  Permutation inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = static_cast<Vertex>(i);
  return inv;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[b[i]];
  return out;
}

PartialMap PartialMap::identity(int host_size) {
  PartialMap map(host_size);
  for (Vertex v = 0; v < host_size; ++v) map.set(v, v);
  return map;
}

PartialMap PartialMap::from_pairs(int host_size,
                                  std::span<const std::pair<Vertex, Vertex>> pairs) {
  PartialMap map(host_size);
  for (auto [from, to] : pairs) {
    if (from < 0 || from >= host_size || to < 0 || to >= host_size) {
      throw InputError("partial map pair out of range");
    }
    if (map.defined(from) && map(from) != to) throw InputError("partial map is not a function");
    map.set(from, to);
  }
  if (!map.is_injective()) throw InputError("partial map is not injective");
  return map;
}

std::vector<Vertex> PartialMap::domain() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < host_size(); ++v) {
    if (defined(v)) out.push_back(v);
  }
  return out;
}

std::vector<Vertex> PartialMap::range() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < host_size(); ++v) {
    if (defined(v)) out.push_back(image_[v]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int PartialMap::size() const {
  return static_cast<int>(std::count_if(image_.begin(), image_.end(),
                                        [](Vertex w) { return w != kUnmapped; }));
}

bool PartialMap::is_injective() const {
  std::vector<bool> seen(image_.size(), false);
  for (Vertex w : image_) {
    if (w == kUnmapped) continue;
    if (w < 0 || w >= host_size() || seen[w]) return false;
    seen[w] = true;
  }
  return true;
}

bool PartialMap::extended_by(const Permutation& total) const {
  for (Vertex v = 0; v < host_size(); ++v) {
    if (defined(v) && total[v] != image_[v]) return false;
  }
  return true;
}

bool is_partial_isomorphism(const Graph& g, const PartialMap& map) {
  if (map.host_size() != g.size() || !map.is_injective()) return false;
  const auto dom = map.domain();
  for (std::size_t i = 0; i < dom.size(); ++i) {
    for (std::size_t j = i + 1; j < dom.size(); ++j) {
      if (g.dist(dom[i], dom[j]) != g.dist(map(dom[i]), map(dom[j]))) return false;
    }
  }
  return true;
}

bool is_automorphism(const Graph& g, const Permutation& p) {
  if (static_cast<int>(p.size()) != g.size()) return false;
  std::vector<bool> seen(p.size(), false);
  for (Vertex w : p) {
    if (w < 0 || w >= g.size() || seen[w]) return false;
    seen[w] = true;
  }
  for (Vertex u = 0; u < g.size(); ++u) {
    for (Vertex v = u + 1; v < g.size(); ++v) {
      if (g.dist(u, v) != g.dist(p[u], p[v])) return false;
    }
  }
  return true;
}

bool is_irreducible(const Graph& g) { return g.is_complete(); }

bool is_completion_of(const Graph& completed, const Graph& partial) {
  if (completed.names() != partial.names()) {
    throw InputError("completion check needs identical vertex lists");
  }
  for (Vertex u = 0; u < partial.size(); ++u) {
    for (Vertex v = u + 1; v < partial.size(); ++v) {
      if (partial.has_edge(u, v) && partial.dist(u, v) != completed.dist(u, v)) return false;
    }
  }
  return true;
}

std::string describe_pair(const Graph& g, Vertex u, Vertex v) {
  return "{" + g.name(u) + ", " + g.name(v) + "}";
}

}  // namespace antipodal
