#include "antipodal/cherlin.hpp"

#include <algorithm>

#include "antipodal/error.hpp"

namespace antipodal {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::OddNonBipartite: return "odd-nonbipartite";
    case Variant::EvenBipartite: return "even-bipartite";
    case Variant::Unrestricted: return "unrestricted";
  }
  return "unrestricted";
}

Variant parse_variant(const std::string& text) {
  if (text == "odd-nonbipartite") return Variant::OddNonBipartite;
  if (text == "even-bipartite") return Variant::EvenBipartite;
  if (text == "unrestricted") return Variant::Unrestricted;
  throw InputError("unknown variant '" + text + "'");
}

ClassDescriptor ClassDescriptor::make(int delta, int K) {
  Variant variant = Variant::Unrestricted;
  if (delta % 2 == 1 && 2 * K <= delta) variant = Variant::OddNonBipartite;
  if (delta % 2 == 0 && K == delta) variant = Variant::EvenBipartite;
  return make(delta, K, variant);
}

ClassDescriptor ClassDescriptor::make(int delta, int K, Variant variant) {
  if (delta < 2) throw InputError("delta must be at least 2");
  if (!((K >= 1 && 2 * K <= delta) || K == delta)) {
    throw InputError("K must satisfy 1 <= K <= delta/2 or K = delta (delta=" +
                     std::to_string(delta) + ", K=" + std::to_string(K) + ")");
  }
  if (variant == Variant::OddNonBipartite && !(delta % 2 == 1 && 2 * K <= delta)) {
    throw InputError("odd-nonbipartite needs odd delta and K <= delta/2");
  }
  if (variant == Variant::EvenBipartite && !(delta % 2 == 0 && K == delta)) {
    throw InputError("even-bipartite needs even delta and K = delta");
  }
  return ClassDescriptor{delta, K, variant};
}

GeneralClassDescriptor ClassDescriptor::folded() const {
  return GeneralClassDescriptor::from_antipodal(*this);
}

GeneralClassDescriptor GeneralClassDescriptor::from_antipodal(const ClassDescriptor& desc) {
  GeneralClassDescriptor g;
  g.diameter = desc.delta - 1;
  if (desc.K != desc.delta) g.K1 = desc.K;
  g.K2 = desc.delta - desc.K;
  g.C0 = 2 * desc.delta + 2;
  g.C1 = 2 * desc.delta + 1;
  return g;
}

bool violates_class_clauses(int a, int b, int c, const ClassDescriptor& desc) {
  const int p = a + b + c;
  const int m = std::min({a, b, c});
  const bool odd = p % 2 == 1;
  return p > 2 * desc.delta || (odd && p < 2 * desc.K) ||
         (odd && p > 2 * (desc.delta - desc.K) + 2 * m);
}

bool violates_class_clauses(int a, int b, int c, const GeneralClassDescriptor& desc) {
  const int p = a + b + c;
  const int m = std::min({a, b, c});
  const bool odd = p % 2 == 1;
  if (odd && (!desc.K1 || p < 2 * *desc.K1)) return true;
  return (odd && p > 2 * desc.K2 + 2 * m) || (!odd && p >= desc.C0) || (odd && p >= desc.C1);
}

bool violates_triangle_inequality(int a, int b, int c) {
  return a > b + c || b > a + c || c > a + b;
}

namespace {

void require_labels(int a, int b, int c, int diameter) {
  for (int x : {a, b, c}) {
    if (x < 1 || x > diameter) {
      throw InputError("triangle label " + std::to_string(x) + " outside {1.." +
                       std::to_string(diameter) + "}");
    }
  }
}

template <class Desc>
MembershipReport scan_triangles(const Graph& g, const Desc& desc, int diameter) {
  if (!g.is_complete()) {
    throw InputError("membership needs a complete graph; run a completion first");
  }
  MembershipReport report;
  for (auto [u, v] : g.edges()) {
    if (g.dist(u, v) > diameter) {
      report.member = false;
      report.diagnostic = "label " + std::to_string(g.dist(u, v)) + " on " +
                          describe_pair(g, u, v) + " exceeds diameter " +
                          std::to_string(diameter);
      return report;
    }
  }
  const int n = g.size();
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      for (Vertex w = v + 1; w < n; ++w) {
        const int a = g.dist(u, v), b = g.dist(v, w), c = g.dist(u, w);
        if (is_forbidden_triangle(a, b, c, desc)) {
          report.member = false;
          report.triangle = std::array<Vertex, 3>{u, v, w};
          std::array<int, 3> sorted{a, b, c};
          std::sort(sorted.begin(), sorted.end());
          report.diagnostic = "forbidden triangle " + g.name(u) + " " + g.name(v) + " " + g.name(w) + " (" +
                              std::to_string(sorted[0]) + "," + std::to_string(sorted[1]) + "," +
                              std::to_string(sorted[2]) + "): d(" + g.name(u) + "," + g.name(v) +
                              ")=" + std::to_string(a) + " d(" + g.name(v) + "," + g.name(w) +
                              ")=" + std::to_string(b) + " d(" + g.name(u) + "," + g.name(w) +
                              ")=" + std::to_string(c);
          return report;
        }
      }
    }
  }
  return report;
}

}  // namespace

bool is_forbidden_triangle(int a, int b, int c, const ClassDescriptor& desc) {
  require_labels(a, b, c, desc.delta);
  return violates_triangle_inequality(a, b, c) || violates_class_clauses(a, b, c, desc);
}

bool is_forbidden_triangle(int a, int b, int c, const GeneralClassDescriptor& desc) {
  require_labels(a, b, c, desc.diameter);
  return violates_triangle_inequality(a, b, c) || violates_class_clauses(a, b, c, desc);
}

MembershipReport check_membership(const Graph& g, const ClassDescriptor& desc) {
  return scan_triangles(g, desc, desc.delta);
}

MembershipReport check_membership(const Graph& g, const GeneralClassDescriptor& desc) {
  return scan_triangles(g, desc, desc.diameter);
}

bool is_member(const Graph& g, const ClassDescriptor& desc) {
  return check_membership(g, desc).member;
}

bool is_member(const Graph& g, const GeneralClassDescriptor& desc) {
  return check_membership(g, desc).member;
}

bool DeltaMatching::perfect() const {
  return std::all_of(index_of.begin(), index_of.end(), [](int i) { return i >= 0; });
}

Vertex DeltaMatching::mate(Vertex v) const {
  const int i = index_of[v];
  if (i < 0) return PartialMap::kUnmapped;
  return edges[i].first == v ? edges[i].second : edges[i].first;
}

DeltaMatching delta_matching(const Graph& g) {
  DeltaMatching m;
  m.index_of.assign(g.size(), -1);
  for (auto [u, v] : g.edges()) {
    if (g.dist(u, v) != g.delta()) continue;
    if (m.index_of[u] >= 0 || m.index_of[v] >= 0) {
      throw InputError("edges of length delta do not form a matching (at " +
                       describe_pair(g, u, v) + ")");
    }
    m.index_of[u] = m.index_of[v] = m.size();
    m.edges.emplace_back(u, v);
  }
  // edges() is lexicographic, so edges are already ordered by smaller endpoint.
  if (g.delta() % 2 == 0 && g.is_complete() && has_consistent_bipartition(g)) {
    const auto part = bipartition(g);
    for (auto [x, y] : m.edges) m.first_part.push_back(part[x] == 0);
  }
  return m;
}

std::vector<int> bipartition(const Graph& g) {
  std::vector<int> part(g.size(), 0);
  for (Vertex v = 1; v < g.size(); ++v) {
    if (!g.has_edge(0, v)) throw InputError("bipartition needs a complete graph");
    part[v] = g.dist(0, v) % 2;
  }
  return part;
}

bool has_consistent_bipartition(const Graph& g) {
  if (!g.is_complete()) return false;
  const auto part = bipartition(g);
  for (auto [u, v] : g.edges()) {
    if ((g.dist(u, v) % 2 == 1) != (part[u] != part[v])) return false;
  }
  return true;
}

namespace {

std::string fresh_name(const GraphBuilder& b, std::string name, char suffix) {
  do {
    name += suffix;
  } while (b.view().find(name));
  return name;
}

}  // namespace

ClosureResult antipodal_closure(const Graph& g, const ClassDescriptor& desc) {
  if (g.delta() != desc.delta) throw InputError("graph delta does not match class delta");
  auto report = check_membership(g, desc);
  if (!report.member) throw InputError("antipodal closure needs a member: " + report.diagnostic);
  const auto matching = delta_matching(g);
  const int n = g.size();
  const int delta = desc.delta;

  GraphBuilder b(g);
  std::vector<Vertex> mate_of(n, PartialMap::kUnmapped);
  for (Vertex v = 0; v < n; ++v) {
    if (matching.mate(v) == PartialMap::kUnmapped) {
      mate_of[v] = b.add_vertex(fresh_name(b, g.name(v), '*'));
    }
  }
  for (Vertex u = 0; u < n; ++u) {
    if (mate_of[u] == PartialMap::kUnmapped) continue;
    const Vertex us = mate_of[u];
    b.set(u, us, delta);
    for (Vertex w = 0; w < n; ++w) {
      if (w == u) continue;
      b.set(us, w, delta - g.dist(u, w));
      if (mate_of[w] != PartialMap::kUnmapped && w > u) {
        b.set(us, mate_of[w], g.dist(u, w));
      }
    }
  }
  Graph closed = std::move(b).build();
  auto closed_report = check_membership(closed, desc);
  if (!closed_report.member) {
    throw std::logic_error("antipodal closure left the class: " + closed_report.diagnostic);
  }
  auto closed_matching = delta_matching(closed);
  return {std::move(closed), std::move(closed_matching)};
}

Graph fold(const Graph& g) {
  const auto m = delta_matching(g);
  std::vector<Vertex> reps;
  for (auto [x, y] : m.edges) reps.push_back(x);
  return fold(g, reps);
}

Graph fold(const Graph& g, const std::vector<Vertex>& representatives) {
  const auto m = delta_matching(g);
  if (!m.perfect()) throw InputError("fold needs a perfect matching of delta-edges");
  if (static_cast<int>(representatives.size()) != m.size()) {
    throw InputError("fold needs exactly one representative per delta-edge");
  }
  std::vector<bool> seen(m.size(), false);
  for (Vertex r : representatives) {
    if (r < 0 || r >= g.size() || seen[m.index_of[r]]) {
      throw InputError("representatives must pick one vertex from each delta-edge");
    }
    seen[m.index_of[r]] = true;
  }
  std::vector<Vertex> ordered = representatives;
  std::sort(ordered.begin(), ordered.end(),
            [&](Vertex a, Vertex b) { return m.index_of[a] < m.index_of[b]; });
  GraphBuilder b(std::max(1, g.delta() - 1));
  for (Vertex r : ordered) b.add_vertex(g.name(r));
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    for (std::size_t j = i + 1; j < ordered.size(); ++j) {
      b.set(static_cast<Vertex>(i), static_cast<Vertex>(j), g.dist(ordered[i], ordered[j]));
    }
  }
  return std::move(b).build();
}

Graph unfold(const Graph& h, const ClassDescriptor& desc) {
  const auto folded = desc.folded();
  if (h.max_label() > folded.diameter) throw InputError("unfold input exceeds diameter delta-1");
  auto report = check_membership(h, folded);
  if (!report.member) throw InputError("unfold needs a member of the folded class: " + report.diagnostic);

  const int n = h.size();
  const int delta = desc.delta;
  GraphBuilder b(delta);
  for (Vertex v = 0; v < n; ++v) b.add_vertex(h.name(v));
  std::vector<Vertex> copy(n);
  for (Vertex v = 0; v < n; ++v) copy[v] = b.add_vertex(fresh_name(b, h.name(v), '\''));
  for (Vertex u = 0; u < n; ++u) {
    b.set(u, copy[u], delta);
    for (Vertex v = u + 1; v < n; ++v) {
      const int d = h.dist(u, v);
      b.set(u, v, d);
      b.set(copy[u], copy[v], d);
      b.set(u, copy[v], delta - d);
      b.set(copy[u], v, delta - d);
    }
  }
  return std::move(b).build();
}

}  // namespace antipodal
