#include "antipodal/completion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "antipodal/automorphisms.hpp"
#include "pair_csp.hpp"

namespace antipodal {

std::string CycleSpec::describe(const Graph& g) const {
  std::string out = "cycle";
  for (Vertex v : vertices) out += " " + g.name(v);
  out += " (";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(labels[i]);
  }
  return out + ")";
}

namespace {

constexpr int kUnreachable = std::numeric_limits<int>::max() / 4;

struct ShortestPaths {
  int n = 0;
  std::vector<int> dist;
  std::vector<Vertex> next;  // first hop on a shortest path u -> v

  int at(Vertex u, Vertex v) const { return dist[static_cast<std::size_t>(u) * n + v]; }
  std::vector<Vertex> path(Vertex u, Vertex v) const {
    std::vector<Vertex> out{u};
    while (u != v) {
      u = next[static_cast<std::size_t>(u) * n + v];
      out.push_back(u);
    }
    return out;
  }
};

ShortestPaths all_pairs(const Graph& g) {
  const int n = g.size();
  ShortestPaths sp{n, std::vector<int>(static_cast<std::size_t>(n) * n, kUnreachable),
                   std::vector<Vertex>(static_cast<std::size_t>(n) * n, PartialMap::kUnmapped)};
  auto idx = [n](Vertex u, Vertex v) { return static_cast<std::size_t>(u) * n + v; };
  for (Vertex u = 0; u < n; ++u) {
    sp.dist[idx(u, u)] = 0;
    sp.next[idx(u, u)] = u;
    for (Vertex v = 0; v < n; ++v) {
      if (u != v && g.has_edge(u, v)) {
        sp.dist[idx(u, v)] = g.dist(u, v);
        sp.next[idx(u, v)] = v;
      }
    }
  }
  for (Vertex k = 0; k < n; ++k) {
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = 0; v < n; ++v) {
        const int through = sp.dist[idx(u, k)] + sp.dist[idx(k, v)];
        if (through < sp.dist[idx(u, v)]) {
          sp.dist[idx(u, v)] = through;
          sp.next[idx(u, v)] = sp.next[idx(u, k)];
        }
      }
    }
  }
  return sp;
}

}  // namespace

std::optional<CycleSpec> find_non_metric_cycle(const Graph& g) {
  const auto sp = all_pairs(g);
  for (auto [u, v] : g.edges()) {
    if (sp.at(u, v) >= g.dist(u, v)) continue;
    CycleSpec cycle;
    cycle.vertices = sp.path(u, v);
    for (std::size_t i = 0; i + 1 < cycle.vertices.size(); ++i) {
      cycle.labels.push_back(g.dist(cycle.vertices[i], cycle.vertices[i + 1]));
    }
    cycle.labels.push_back(g.dist(v, u));
    return cycle;
  }
  return std::nullopt;
}

Graph shortest_path_completion(const Graph& g) {
  if (auto cycle = find_non_metric_cycle(g)) {
    throw NonMetricCycleError("non-metric " + cycle->describe(g), *cycle);
  }
  const auto sp = all_pairs(g);
  int longest = g.delta();
  for (Vertex u = 0; u < g.size(); ++u) {
    for (Vertex v = u + 1; v < g.size(); ++v) {
      if (sp.at(u, v) >= kUnreachable) {
        throw InputError("graph is disconnected: no path between " + describe_pair(g, u, v));
      }
      longest = std::max(longest, sp.at(u, v));
    }
  }
  GraphBuilder b(g);
  b.set_delta(longest);
  for (Vertex u = 0; u < g.size(); ++u) {
    for (Vertex v = u + 1; v < g.size(); ++v) b.set(u, v, sp.at(u, v));
  }
  return std::move(b).build();
}

namespace {

bool cycle_completable(std::span<const int> labels, bool closed, const detail::TriangleTable& table) {
  const int k = static_cast<int>(labels.size());
  detail::PairCsp csp(k, table);
  const int edges = closed ? k : k - 1;
  for (int i = 0; i < edges; ++i) csp.assign(i, (i + 1) % k, labels[i]);
  return csp.backtrack(detail::centre_preference(table.max_label())).has_value();
}

void check_cycle(std::span<const int> labels, int diameter, int max_length) {
  if (labels.size() < 3) throw InputError("a cycle needs at least 3 edges");
  if (static_cast<int>(labels.size()) > max_length) {
    throw SizeLimitError("cycle of length " + std::to_string(labels.size()) + " refused", max_length);
  }
  if (diameter > detail::kMaxCspLabel) {
    throw SizeLimitError("diameter " + std::to_string(diameter) + " refused", detail::kMaxCspLabel);
  }
  for (int a : labels) {
    if (a < 1 || a > diameter) {
      throw InputError("cycle label " + std::to_string(a) + " outside {1.." + std::to_string(diameter) + "}");
    }
  }
}

}  // namespace

bool forbidden_cycle_oracle(std::span<const int> labels, const GeneralClassDescriptor& desc, int max_length) {
  check_cycle(labels, desc.diameter, max_length);
  const auto table = detail::general_table(desc);
  return !cycle_completable(labels, true, table);
}

namespace {

// Work cap for the sweep: label sequences per length.
constexpr double kMaxSweep = 4e6;

bool is_canonical_cycle(const std::vector<int>& labels) {
  const int k = static_cast<int>(labels.size());
  for (int r = 0; r < k; ++r) {
    for (int dir : {1, -1}) {
      for (int i = 0; i < k; ++i) {
        const int j = ((r + dir * i) % k + k) % k;
        if (labels[j] != labels[i]) {
          if (labels[j] < labels[i]) return false;
          break;
        }
      }
    }
  }
  return true;
}

}  // namespace

LocalFinitenessBound local_finiteness_bound(const GeneralClassDescriptor& desc, int cycle_bound) {
  if (cycle_bound < 3) throw InputError("cycle bound must be at least 3");
  if (desc.diameter > detail::kMaxCspLabel) {
    throw SizeLimitError("diameter " + std::to_string(desc.diameter) + " refused", detail::kMaxCspLabel);
  }
  LocalFinitenessBound result;
  result.cycle_bound = cycle_bound;
  const auto table = detail::general_table(desc);
  const int d = desc.diameter;
  for (int k = 3; k <= cycle_bound; ++k) {
    if (std::pow(static_cast<double>(d), k) > kMaxSweep) {
      result.exhaustive = false;
      break;
    }
    std::vector<int> labels(k, 1);
    while (true) {
      if (is_canonical_cycle(labels) && !cycle_completable(labels, true, table)) {
        bool minimal = true;
        for (int drop = 0; drop < k && minimal; ++drop) {
          std::vector<int> path;
          for (int i = 1; i < k; ++i) path.push_back(labels[(drop + i) % k]);
          path.push_back(labels[drop]);  // dropped edge closes the rotation; left unassigned
          if (!cycle_completable(path, false, table)) minimal = false;
        }
        if (minimal) {
          result.minimal_cycles.push_back(labels);
          result.largest_forbidden_cycle = k;
        }
      }
      int pos = k - 1;
      while (pos >= 0 && labels[pos] == d) labels[pos--] = 1;
      if (pos < 0) break;
      ++labels[pos];
    }
  }
  result.n = std::max(4, 2 * result.largest_forbidden_cycle);
  return result;
}

LocalFinitenessBound local_finiteness_bound(const ClassDescriptor& desc, int cycle_bound) {
  return local_finiteness_bound(desc.folded(), cycle_bound);
}

ParityFunction& ParityFunction::set(Vertex u, Vertex v, int bit) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v) throw InputError("f is defined on pairs of distinct vertices");
  if (bit != 0 && bit != 1) throw InputError("f takes values 0 or 1");
  bits_[index(u, v)] = bits_[index(v, u)] = static_cast<unsigned char>(bit);
  return *this;
}

OrientationSet::OrientationSet(int delta, std::vector<int> members)
    : delta_(delta), member_(delta + 1, false) {
  if (delta < 1) throw InputError("orientation set needs delta >= 1");
  for (int a : members) {
    if (a < 0 || a > delta) throw InputError("orientation member " + std::to_string(a) + " outside {0.." + std::to_string(delta) + "}");
    member_[a] = true;
  }
  if (!member_[delta]) throw InputError("orientation set must contain delta");
  for (int a = 0; a <= delta; ++a) {
    if (2 * a == delta) continue;
    if (member_[a] == member_[delta - a]) {
      throw InputError("orientation set must contain exactly one of " + std::to_string(a) + " and " +
                       std::to_string(delta - a));
    }
  }
}

OrientationSet OrientationSet::upper_half(int delta) {
  std::vector<int> members;
  for (int a = 0; a <= delta; ++a) {
    if (2 * a >= delta) members.push_back(a);
  }
  return OrientationSet(delta, std::move(members));
}

OrientationSet OrientationSet::odd(int delta) {
  if (delta % 2 == 0) throw InputError("odd orientation needs an odd delta");
  std::vector<int> members;
  for (int a = 1; a <= delta; a += 2) members.push_back(a);
  return OrientationSet(delta, std::move(members));
}

OrientationSet OrientationSet::standard(int delta) {
  return delta % 2 == 1 ? odd(delta) : upper_half(delta);
}

std::vector<int> OrientationSet::members() const {
  std::vector<int> out;
  for (int a = 0; a <= delta_; ++a) {
    if (member_[a]) out.push_back(a);
  }
  return out;
}

bool parity_clause_holds(int f, int label, const OrientationSet& orientation) {
  return f == 1 ? orientation.contains(label) : orientation.contains_complement(label);
}

std::string FViolation::describe(const Graph& g) const {
  std::string names;
  for (Vertex v : vertices) names += " " + g.name(v);
  switch (clause) {
    case Clause::EdgeParity: return "f disagrees with the label on" + names;
    case Clause::MatchedSame: return "f(u1u2) != f(v1v2) for u1 v1 u2 v2 =" + names;
    case Clause::MatchedCross: return "f(u1v2) != f(u2v1) for u1 v1 u2 v2 =" + names;
    case Clause::MatchedDiffer: return "f(u1u2) == f(u1v2) for u1 v1 u2 v2 =" + names;
  }
  return "f violation on" + names;
}

namespace {

OrientationSet resolve_orientation(int delta, const OrientationSet* orientation) {
  if (!orientation) return OrientationSet::standard(delta);
  if (orientation->delta() != delta) throw InputError("orientation set built for another delta");
  return *orientation;
}

}  // namespace

std::vector<FViolation> check_f_conditions(const Graph& g, const ParityFunction& f, const ClassDescriptor& desc,
                                           const OrientationSet* orientation) {
  if (f.size() != g.size()) throw InputError("f is defined on a different vertex set");
  const OrientationSet o = resolve_orientation(desc.delta, orientation);
  std::vector<FViolation> out;
  std::vector<std::pair<Vertex, Vertex>> delta_edges;
  for (auto [u, v] : g.edges()) {
    if (!parity_clause_holds(f(u, v), g.dist(u, v), o)) {
      out.push_back({FViolation::Clause::EdgeParity, {u, v}});
    }
    if (g.dist(u, v) == desc.delta) delta_edges.emplace_back(u, v);
  }
  for (std::size_t a = 0; a < delta_edges.size(); ++a) {
    for (std::size_t b = a + 1; b < delta_edges.size(); ++b) {
      const auto [u1, v1] = delta_edges[a];
      const auto [u2, v2] = delta_edges[b];
      if (u1 == u2 || u1 == v2 || v1 == u2 || v1 == v2) continue;
      const std::vector<Vertex> quad{u1, v1, u2, v2};
      if (f(u1, u2) != f(v1, v2)) out.push_back({FViolation::Clause::MatchedSame, quad});
      if (f(u1, v2) != f(u2, v1)) out.push_back({FViolation::Clause::MatchedCross, quad});
      if (f(u1, u2) == f(u1, v2)) out.push_back({FViolation::Clause::MatchedDiffer, quad});
    }
  }
  return out;
}

namespace {

std::vector<int> canonical_rotation(std::vector<int> labels) {
  std::vector<int> best = labels;
  const int k = static_cast<int>(labels.size());
  for (int dir = 0; dir < 2; ++dir) {
    for (int r = 0; r < k; ++r) {
      std::rotate(labels.begin(), labels.begin() + 1, labels.end());
      best = std::min(best, labels);
    }
    std::reverse(labels.begin(), labels.end());
  }
  return best;
}

// Simple cycles of the folded graph up to `bound` vertices that the oracle
// flags as forbidden. Stops after the first hit.
std::optional<std::vector<int>> forbidden_folded_cycle(const Graph& folded, const GeneralClassDescriptor& desc,
                                                       int bound, std::vector<int>& cycle_vertices) {
  const int n = folded.size();
  const auto table = detail::general_table(desc);
  std::map<std::vector<int>, bool> memo;
  std::vector<int> path;
  std::vector<bool> on_path(n, false);
  std::optional<std::vector<int>> found;

  std::function<void(Vertex)> extend = [&](Vertex start) {
    const Vertex last = path.back();
    if (path.size() >= 3 && folded.has_edge(last, start) && path[1] < last) {
      std::vector<int> labels;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) labels.push_back(folded.dist(path[i], path[i + 1]));
      labels.push_back(folded.dist(last, start));
      auto key = canonical_rotation(labels);
      auto it = memo.find(key);
      if (it == memo.end()) it = memo.emplace(key, !cycle_completable(labels, true, table)).first;
      if (it->second) {
        found = labels;
        cycle_vertices = path;
        return;
      }
    }
    if (static_cast<int>(path.size()) >= bound) return;
    for (Vertex w = start + 1; w < n && !found; ++w) {
      if (on_path[w] || !folded.has_edge(last, w)) continue;
      on_path[w] = true;
      path.push_back(w);
      extend(start);
      path.pop_back();
      on_path[w] = false;
    }
  };
  for (Vertex s = 0; s < n && !found; ++s) {
    path = {s};
    on_path.assign(n, false);
    on_path[s] = true;
    extend(s);
  }
  return found;
}

// Folded partial graph on the smaller endpoint of every delta-edge.
Graph folded_partial(const Graph& g, const DeltaMatching& matching) {
  GraphBuilder b(std::max(1, g.delta() - 1));
  for (auto [x, y] : matching.edges) b.add_vertex(g.name(x));
  for (int i = 0; i < matching.size(); ++i) {
    for (int j = i + 1; j < matching.size(); ++j) {
      const Vertex xi = matching.edges[i].first, xj = matching.edges[j].first;
      if (g.has_edge(xi, xj) && g.dist(xi, xj) < g.delta()) b.set(i, j, g.dist(xi, xj));
    }
  }
  return std::move(b).build();
}

bool has_odd_cycle(const Graph& g) {
  std::vector<int> colour(g.size(), -1);
  for (Vertex s = 0; s < g.size(); ++s) {
    if (colour[s] >= 0) continue;
    colour[s] = 0;
    std::vector<Vertex> stack{s};
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      for (Vertex v = 0; v < g.size(); ++v) {
        if (v == u || !g.has_edge(u, v)) continue;
        const int want = colour[u] ^ (g.dist(u, v) % 2);
        if (colour[v] < 0) {
          colour[v] = want;
          stack.push_back(v);
        } else if (colour[v] != want) {
          return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

std::vector<std::string> antipodal_completion_diagnostics(const Graph& g, const ParityFunction& f,
                                                          const ClassDescriptor& desc,
                                                          const OrientationSet* orientation, int cycle_bound) {
  std::vector<std::string> diags;
  if (g.delta() != desc.delta) {
    diags.push_back("graph delta " + std::to_string(g.delta()) + " differs from class delta " +
                    std::to_string(desc.delta));
    return diags;
  }
  if (f.size() != g.size()) {
    diags.push_back("f covers " + std::to_string(f.size()) + " vertices, graph has " + std::to_string(g.size()));
    return diags;
  }
  DeltaMatching matching;
  try {
    matching = delta_matching(g);
  } catch (const InputError& e) {
    diags.push_back(e.what());
    return diags;
  }
  for (Vertex v = 0; v < g.size(); ++v) {
    if (matching.mate(v) == PartialMap::kUnmapped) diags.push_back("vertex " + g.name(v) + " has no delta-edge");
  }
  for (auto [u, v] : matching.edges) {
    for (Vertex w = 0; w < g.size(); ++w) {
      if (w == u || w == v) continue;
      const bool hu = g.has_edge(u, w), hv = g.has_edge(v, w);
      if (!hu && !hv) continue;
      if (hu != hv || g.dist(u, w) + g.dist(v, w) != desc.delta) {
        diags.push_back("antipodal rule fails: " + g.name(w) + " against delta-edge " + describe_pair(g, u, v));
      }
    }
  }
  for (const auto& violation : check_f_conditions(g, f, desc, orientation)) {
    diags.push_back(violation.describe(g));
  }
  if (desc.bipartite() && has_odd_cycle(g)) diags.push_back("graph contains an odd-perimeter cycle");
  if (!diags.empty()) return diags;

  const Graph folded = folded_partial(g, matching);
  const auto general = desc.folded();
  const auto table = detail::general_table(general);
  detail::PairCsp whole(folded.size(), table);
  for (auto [i, j] : folded.edges()) whole.assign(i, j, folded.dist(i, j));
  if (whole.backtrack(detail::centre_preference(general.diameter))) return diags;
  std::vector<int> vertices;
  if (auto labels = forbidden_folded_cycle(folded, general, cycle_bound, vertices)) {
    std::string text = "folded image contains a forbidden";
    CycleSpec cycle{{}, *labels};
    for (int i : vertices) cycle.vertices.push_back(matching.edges[i].first);
    diags.push_back(text + " " + cycle.describe(g));
  }
  return diags;
}

namespace {

Graph unfold_labels(const Graph& g, const DeltaMatching& matching, const std::vector<int>& labels) {
  const int m = matching.size();
  const int delta = g.delta();
  GraphBuilder b(g);
  for (int i = 0; i < m; ++i) {
    const auto [xi, yi] = matching.edges[i];
    b.set(xi, yi, delta);
    for (int j = i + 1; j < m; ++j) {
      const auto [xj, yj] = matching.edges[j];
      const int a = labels[static_cast<std::size_t>(i) * m + j];
      b.set(xi, xj, a);
      b.set(yi, yj, a);
      b.set(xi, yj, delta - a);
      b.set(yi, xj, delta - a);
    }
  }
  return std::move(b).build();
}

bool preserves_f(const ParityFunction& f, const Permutation& p) {
  const int n = f.size();
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (f(u, v) != f(p[u], p[v])) return false;
    }
  }
  return true;
}

// f-preserving automorphisms of g, acting on delta-edge indices; the sign
// records whether the first endpoint goes to a second endpoint.
std::vector<detail::PairCsp::SignedPermutation> matching_symmetries(const Graph& g, const ParityFunction& f,
                                                                    const DeltaMatching& matching) {
  std::vector<detail::PairCsp::SignedPermutation> group;
  const int m = matching.size();
  for_each_automorphism(g, {}, [&](const Permutation& p) {
    if (!preserves_f(f, p)) return true;
    detail::PairCsp::SignedPermutation s{std::vector<int>(m), std::vector<bool>(m)};
    for (int i = 0; i < m; ++i) {
      const Vertex image = p[matching.edges[i].first];
      s.image[i] = matching.index_of[image];
      s.sign[i] = matching.edges[s.image[i]].first != image;
    }
    group.push_back(std::move(s));
    return true;
  });
  return group;
}

}  // namespace

Graph antipodal_complete(const Graph& g, const ParityFunction& f, const ClassDescriptor& desc,
                         const OrientationSet* orientation, const CompletionOptions& options) {
  auto diags = antipodal_completion_diagnostics(g, f, desc, orientation, options.cycle_bound);
  if (!diags.empty()) throw PreconditionError("antipodal completion preconditions fail", std::move(diags));
  const OrientationSet o = resolve_orientation(desc.delta, orientation);
  const auto matching = delta_matching(g);
  const int m = matching.size();
  const int delta = desc.delta;
  if (m == 0) return g;
  if (delta - 1 > detail::kMaxCspLabel) {
    throw SizeLimitError("delta " + std::to_string(delta) + " refused", detail::kMaxCspLabel + 1);
  }

  const auto table = detail::switching_table(desc);
  detail::PairCsp csp(m, table);
  for (int i = 0; i < m; ++i) {
    const auto [xi, yi] = matching.edges[i];
    for (int j = i + 1; j < m; ++j) {
      const auto [xj, yj] = matching.edges[j];
      if (g.has_edge(xi, xj)) {
        csp.assign(i, j, g.dist(xi, xj));
        continue;
      }
      detail::LabelMask allowed = 0;
      for (int a = 1; a < delta; ++a) {
        if (parity_clause_holds(f(xi, xj), a, o) && parity_clause_holds(f(yi, yj), a, o) &&
            parity_clause_holds(f(xi, yj), delta - a, o) && parity_clause_holds(f(yi, xj), delta - a, o)) {
          allowed |= detail::label_bit(a);
        }
      }
      csp.restrict(i, j, allowed);
    }
  }
  if (!csp.propagate()) throw NoCompletionError("no completion: candidate labels exhausted during propagation");
  const auto rank = detail::switch_symmetric_preference(delta);
  std::vector<int> labels = csp.select_simultaneous(rank);
  bool fallback = false;
  if (!csp.consistent(labels)) {
    std::optional<std::vector<int>> found;
    if (g.size() <= kMaxEnumerationVertices) {
      found = csp.backtrack_invariant(rank, matching_symmetries(g, f, matching), delta);
      if (!found && csp.backtrack(rank)) {
        throw CompletionNotEquivariant(
            "completions exist but none is preserved by every f-preserving automorphism");
      }
    } else {
      found = csp.backtrack(rank);
    }
    if (!found) throw NoCompletionError("no completion: exhaustive search found none");
    labels = std::move(*found);
    fallback = true;
  }
  Graph result = unfold_labels(g, matching, labels);

  const auto report = check_membership(result, desc);
  if (!report.member) throw std::logic_error("completion left the class: " + report.diagnostic);
  if (!is_completion_of(result, g)) throw std::logic_error("completion altered an input label");
  for (Vertex u = 0; u < result.size(); ++u) {
    for (Vertex v = u + 1; v < result.size(); ++v) {
      if (!parity_clause_holds(f(u, v), result.dist(u, v), o)) {
        throw std::logic_error("completion breaks the f clause on " + describe_pair(result, u, v));
      }
    }
  }
  if (options.verify_equivariance && g.size() <= kMaxEnumerationVertices) {
    for_each_automorphism(g, {}, [&](const Permutation& p) {
      if (preserves_f(f, p) && !is_automorphism(result, p)) {
        throw CompletionNotEquivariant(std::string("completion (") +
                                       (fallback ? "backtracking" : "canonical selection") +
                                       ") is not preserved by an f-preserving automorphism");
      }
      return true;
    });
  }
  return result;
}

std::optional<Graph> complete_folded(const Graph& h, const GeneralClassDescriptor& desc) {
  if (desc.diameter > detail::kMaxCspLabel) {
    throw SizeLimitError("diameter " + std::to_string(desc.diameter) + " refused", detail::kMaxCspLabel);
  }
  if (h.max_label() > desc.diameter) throw InputError("labels exceed the class diameter");
  const int n = h.size();
  const auto table = detail::general_table(desc);
  detail::PairCsp csp(n, table);
  for (auto [u, v] : h.edges()) csp.assign(u, v, h.dist(u, v));
  if (!csp.propagate()) return std::nullopt;
  const auto rank = detail::centre_preference(desc.diameter);
  std::vector<int> labels = csp.select_simultaneous(rank);
  if (!csp.consistent(labels)) {
    auto found = csp.backtrack(rank);
    if (!found) return std::nullopt;
    labels = std::move(*found);
  }
  GraphBuilder b(h);
  b.set_delta(desc.diameter);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) b.set(u, v, labels[static_cast<std::size_t>(u) * n + v]);
  }
  return std::move(b).build();
}

}  // namespace antipodal
