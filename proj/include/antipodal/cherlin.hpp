#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "antipodal/graph.hpp"

namespace antipodal {

enum class Variant { OddNonBipartite, EvenBipartite, Unrestricted };

std::string to_string(Variant v);
Variant parse_variant(const std::string& text);

struct GeneralClassDescriptor;

// Parameters (delta, K) of an antipodal class A^delta_K.
struct ClassDescriptor {
  int delta = 3;
  int K = 1;
  Variant variant = Variant::OddNonBipartite;

  // Infers the variant: odd delta with K <= delta/2 is odd non-bipartite,
  // even delta with K = delta is even bipartite, anything else valid is
  // unrestricted.
  static ClassDescriptor make(int delta, int K);
  static ClassDescriptor make(int delta, int K, Variant variant);

  bool bipartite() const { return K == delta; }
  // The diameter-(delta-1) class of folded spaces.
  GeneralClassDescriptor folded() const;

  friend bool operator==(const ClassDescriptor&, const ClassDescriptor&) = default;
};

// Five-parameter class with diameter `diameter`. An absent K1 stands for
// infinity, which forbids every odd perimeter.
struct GeneralClassDescriptor {
  int diameter = 2;
  std::optional<int> K1;
  int K2 = 0;
  int C0 = 0;
  int C1 = 0;

  static GeneralClassDescriptor from_antipodal(const ClassDescriptor& desc);
  friend bool operator==(const GeneralClassDescriptor&, const GeneralClassDescriptor&) = default;
};

// The class clauses alone, without the triangle inequality:
//   antipodal: p > 2 delta, or p odd and p < 2K, or p odd and p > 2(delta-K) + 2 min
//   general:   p odd and p < 2 K1, or p odd and p > 2 K2 + 2 min,
//              or p even and p >= C0, or p odd and p >= C1
bool violates_class_clauses(int a, int b, int c, const ClassDescriptor& desc);
bool violates_class_clauses(int a, int b, int c, const GeneralClassDescriptor& desc);

bool violates_triangle_inequality(int a, int b, int c);

// A triangle is forbidden when it is non-metric or a class clause fires.
// Labels outside {1..diameter} raise InputError.
bool is_forbidden_triangle(int a, int b, int c, const ClassDescriptor& desc);
bool is_forbidden_triangle(int a, int b, int c, const GeneralClassDescriptor& desc);

struct MembershipReport {
  bool member = true;
  // First forbidden triple in lexicographic vertex order.
  std::optional<std::array<Vertex, 3>> triangle;
  std::string diagnostic;
};

// Requires a complete graph; incomplete input raises InputError (complete
// it first).
MembershipReport check_membership(const Graph& g, const ClassDescriptor& desc);
MembershipReport check_membership(const Graph& g, const GeneralClassDescriptor& desc);
bool is_member(const Graph& g, const ClassDescriptor& desc);
bool is_member(const Graph& g, const GeneralClassDescriptor& desc);

// Edges of length delta, enumerated lexicographically by smaller endpoint.
// x = smaller id, y = larger id of each edge.
struct DeltaMatching {
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::vector<int> index_of;  // vertex -> edge index or -1
  // For bipartite spaces: whether each edge lies in the part of vertex 0
  // (D_1). Empty otherwise.
  std::vector<bool> first_part;

  int size() const { return static_cast<int>(edges.size()); }
  bool perfect() const;
  Vertex mate(Vertex v) const;
};

// Throws InputError when the delta-edges do not form a matching.
DeltaMatching delta_matching(const Graph& g);

// The parts of a bipartite space: part[v] = 0 for vertices at even distance
// from vertex 0 (and from each other), 1 otherwise. Requires a complete
// graph whose even-distance relation is an equivalence.
std::vector<int> bipartition(const Graph& g);
bool has_consistent_bipartition(const Graph& g);

struct ClosureResult {
  Graph graph;
  DeltaMatching matching;
};

// Adds an antipodal mate "name*" for every vertex lacking one; new vertices
// are appended in order of their mates.
ClosureResult antipodal_closure(const Graph& g, const ClassDescriptor& desc);

// Keeps one vertex of every delta-edge (the smaller id unless another
// representative is listed in `representatives`). Result has diameter
// delta-1.
Graph fold(const Graph& g);
Graph fold(const Graph& g, const std::vector<Vertex>& representatives);

// Two copies of h (copies named "name'"), joined by delta-edges, remaining
// distances filled by d(u, v') = delta - d(u, v).
Graph unfold(const Graph& h, const ClassDescriptor& desc);

}  // namespace antipodal
