#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace antipodal {

// Vertices are dense indices in insertion order. The index doubles as the
// vertex id for every canonical tie-break in the library.
using Vertex = int;

inline constexpr int kNoLabel = 0;

class GraphBuilder;

// A [delta]-edge-labelled graph: a vertex set together with a partial,
// symmetric, irreflexive distance map into {1..delta}. Value type; it is
// never modified after construction (use GraphBuilder to derive new ones).
class Graph {
 public:
  Graph() = default;

  int delta() const { return delta_; }
  int size() const { return static_cast<int>(names_.size()); }
  bool empty() const { return names_.empty(); }

  const std::string& name(Vertex v) const { return names_[v]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Vertex> find(std::string_view name) const;

  // kNoLabel when undefined or u == v.
  int dist(Vertex u, Vertex v) const { return dist_[index(u, v)]; }
  bool has_edge(Vertex u, Vertex v) const { return dist(u, v) != kNoLabel; }

  bool is_complete() const;
  int edge_count() const;
  int max_label() const;

  // Unordered pairs {u < v} with a defined label, lexicographic.
  std::vector<std::pair<Vertex, Vertex>> edges() const;

  // Substructure induced on `vertices` (in the given order).
  Graph induced(std::span<const Vertex> vertices) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  friend class GraphBuilder;
  std::size_t index(Vertex u, Vertex v) const {
    return static_cast<std::size_t>(u) * names_.size() + static_cast<std::size_t>(v);
  }

  int delta_ = 1;
  std::vector<std::string> names_;
  std::vector<int> dist_;
};

class GraphBuilder {
 public:
  explicit GraphBuilder(int delta);
  explicit GraphBuilder(Graph base);

  Vertex add_vertex(std::string name);
  // Fails on duplicate names.
  Vertex add_vertices(int count, std::string_view prefix);

  // Sets (or with kNoLabel clears) the label of {u, v}. Labels must lie in
  // {1..delta}.
  GraphBuilder& set(Vertex u, Vertex v, int label);
  GraphBuilder& set(std::string_view u, std::string_view v, int label);

  // Raises the diameter bound; used by completions whose outputs may leave
  // the original range (shortest paths).
  GraphBuilder& set_delta(int delta);

  int size() const { return graph_.size(); }
  const Graph& view() const { return graph_; }
  Graph build() && { return std::move(graph_); }
  Graph build() const& { return graph_; }

 private:
  Vertex lookup(std::string_view name) const;
  Graph graph_;
};

using Permutation = std::vector<Vertex>;

Permutation identity_permutation(int n);
Permutation inverse(const Permutation& p);
// (a ∘ b)(v) = a(b(v)).
Permutation compose(const Permutation& a, const Permutation& b);

// An injective partial map on the vertex set of one structure.
class PartialMap {
 public:
  static constexpr Vertex kUnmapped = -1;

  PartialMap() = default;
  explicit PartialMap(int host_size) : image_(host_size, kUnmapped) {}
  static PartialMap identity(int host_size);
  static PartialMap from_pairs(int host_size, std::span<const std::pair<Vertex, Vertex>> pairs);

  int host_size() const { return static_cast<int>(image_.size()); }
  bool defined(Vertex v) const { return image_[v] != kUnmapped; }
  Vertex operator()(Vertex v) const { return image_[v]; }
  void set(Vertex v, Vertex image) { image_[v] = image; }
  void erase(Vertex v) { image_[v] = kUnmapped; }

  std::vector<Vertex> domain() const;
  std::vector<Vertex> range() const;
  int size() const;
  bool is_injective() const;
  // True when every defined pair agrees with `total`.
  bool extended_by(const Permutation& total) const;
  const std::vector<Vertex>& raw() const { return image_; }

  friend auto operator<=>(const PartialMap&, const PartialMap&) = default;

 private:
  std::vector<Vertex> image_;
};

// True iff `map` is an isomorphism between the substructures of `g` induced
// on its domain and range: labels (including "undefined") are preserved.
bool is_partial_isomorphism(const Graph& g, const PartialMap& map);
bool is_automorphism(const Graph& g, const Permutation& p);

// Every pair of distinct vertices carries a label (the only binary
// relations here are the symmetric distance relations).
bool is_irreducible(const Graph& g);

// True iff `completed` keeps every label of `partial` and only adds labels
// on previously unlabelled pairs. Both graphs must share their vertex list.
bool is_completion_of(const Graph& completed, const Graph& partial);

std::string describe_pair(const Graph& g, Vertex u, Vertex v);

}  // namespace antipodal
