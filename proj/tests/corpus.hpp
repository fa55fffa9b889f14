#pragma once

// Test corpora shared by the unit suites and the acceptance binary.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "antipodal/cherlin.hpp"
#include "antipodal/completion.hpp"
#include "antipodal/gamma.hpp"
#include "antipodal/graph.hpp"
#include "oracles.hpp"

namespace corpus {

using antipodal::ClassDescriptor;
using antipodal::Graph;
using antipodal::GraphBuilder;
using antipodal::ParityFunction;
using antipodal::Vertex;

// Every perfect matching of {0..n-1} as a list of pairs (smaller first).
inline std::vector<std::vector<std::pair<int, int>>> perfect_matchings(int n) {
  std::vector<std::vector<std::pair<int, int>>> out;
  std::vector<std::pair<int, int>> current;
  std::vector<bool> used(n, false);
  std::function<void()> rec = [&] {
    int first = 0;
    while (first < n && used[first]) ++first;
    if (first == n) {
      out.push_back(current);
      return;
    }
    used[first] = true;
    for (int second = first + 1; second < n; ++second) {
      if (used[second]) continue;
      used[second] = true;
      current.emplace_back(first, second);
      rec();
      current.pop_back();
      used[second] = false;
    }
    used[first] = false;
  };
  rec();
  return out;
}

// The orientation used throughout: odd labels for odd delta, the upper
// half otherwise.
inline bool in_orientation(int a, int delta) {
  if (delta % 2 == 1) return a % 2 == 1;
  return 2 * a >= delta;
}

inline bool parity_ok(int f, int label, int delta) {
  return f == 1 ? in_orientation(label, delta) : in_orientation(delta - label, delta);
}

struct CompletionInput {
  Graph graph;
  ParityFunction f;
  std::vector<std::pair<int, int>> matching;
};

// Inputs on n = 2, 4, 6 vertices: every perfect matching of delta-edges,
// each pair of delta-edges either unjoined or joined antipodally
// (d(x_i, x_j) = a, d(x_i, y_j) = delta - a, ...), and every f obeying the
// matched-pair rules and the parity clause. Nothing else is filtered.
inline void for_each_completion_input(int delta, int max_n, const std::function<void(const CompletionInput&)>& visit) {
  for (int n = 2; n <= max_n; n += 2) {
    for (const auto& matching : perfect_matchings(n)) {
      const int m = static_cast<int>(matching.size());
      std::vector<std::pair<int, int>> pairs;
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
      // Per pair of delta-edges: label a (0 = unjoined) and bit b = f(x_i x_j).
      std::vector<int> label(pairs.size(), 0), bit(pairs.size(), 0);
      std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == pairs.size()) {
          GraphBuilder b(delta);
          for (int v = 0; v < n; ++v) b.add_vertex("v" + std::to_string(v));
          ParityFunction f(n);
          for (auto [x, y] : matching) {
            b.set(x, y, delta);
            f.set(x, y, 1);
          }
          for (std::size_t p = 0; p < pairs.size(); ++p) {
            const auto [xi, yi] = matching[pairs[p].first];
            const auto [xj, yj] = matching[pairs[p].second];
            if (label[p]) {
              b.set(xi, xj, label[p]).set(yi, yj, label[p]);
              b.set(xi, yj, delta - label[p]).set(yi, xj, delta - label[p]);
            }
            f.set(xi, xj, bit[p]);
            f.set(yi, yj, bit[p]);
            f.set(xi, yj, 1 - bit[p]);
            f.set(yi, xj, 1 - bit[p]);
          }
          visit({b.build(), f, matching});
          return;
        }
        for (int a = 0; a < delta; ++a)
          for (int fb = 0; fb <= 1; ++fb) {
            if (a && !(parity_ok(fb, a, delta) && parity_ok(1 - fb, delta - a, delta))) continue;
            label[k] = a;
            bit[k] = fb;
            rec(k + 1);
          }
      };
      rec(0);
    }
  }
}

// Every completion of `in` that is a member and obeys the parity clause on
// all pairs, by brute force over the unjoined pairs of delta-edges.
inline std::vector<Graph> brute_completions(const CompletionInput& in, int delta, int K) {
  const Graph& g = in.graph;
  const int m = static_cast<int>(in.matching.size());
  std::vector<std::pair<int, int>> open;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (!g.has_edge(in.matching[i].first, in.matching[j].first)) open.emplace_back(i, j);
  std::vector<Graph> out;
  std::vector<int> label(open.size(), 1);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == open.size()) {
      GraphBuilder b(g);
      for (std::size_t p = 0; p < open.size(); ++p) {
        const auto [xi, yi] = in.matching[open[p].first];
        const auto [xj, yj] = in.matching[open[p].second];
        b.set(xi, xj, label[p]).set(yi, yj, label[p]);
        b.set(xi, yj, delta - label[p]).set(yi, xj, delta - label[p]);
      }
      const Graph c = b.build();
      for (Vertex u = 0; u < c.size(); ++u)
        for (Vertex v = u + 1; v < c.size(); ++v)
          if (!parity_ok(in.f(u, v), c.dist(u, v), delta)) return;
      if (oracle::antipodal_member(c, delta, K)) out.push_back(c);
      return;
    }
    for (int a = 1; a < delta; ++a) {
      label[k] = a;
      rec(k + 1);
    }
  };
  rec(0);
  return out;
}

// Random members with a perfect matching of delta-edges: a random partial
// graph of diameter delta-1 on `pairs` vertices is completed in the folded
// class and unfolded. Draws whose completion fails are skipped.
inline std::vector<Graph> random_members(const ClassDescriptor& desc, int count, int min_pairs, int max_pairs,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Graph> out;
  const auto folded = desc.folded();
  while (static_cast<int>(out.size()) < count) {
    const int pairs = min_pairs + static_cast<int>(rng() % static_cast<std::uint64_t>(max_pairs - min_pairs + 1));
    GraphBuilder b(desc.delta - 1);
    for (int i = 0; i < pairs; ++i) b.add_vertex("v" + std::to_string(i));
    for (int u = 0; u < pairs; ++u)
      for (int v = u + 1; v < pairs; ++v)
        if (rng() % 2) b.set(u, v, 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(desc.delta - 1)));
    const auto completed = antipodal::complete_folded(b.build(), folded);
    if (!completed) continue;
    out.push_back(antipodal::unfold(*completed, desc));
  }
  return out;
}

// Every member of the class on n vertices whose delta-edges form a perfect
// matching (n even).
inline std::vector<Graph> members_with_perfect_matching(int delta, int K, int max_n) {
  std::vector<Graph> out;
  for (int n = 2; n <= max_n; n += 2)
    oracle::for_each_complete(
        n, delta, [&](int a, int b, int c) { return oracle::antipodal_forbidden(a, b, c, delta, K); },
        [&](const Graph& g) {
          for (Vertex u = 0; u < n; ++u) {
            int count = 0;
            for (Vertex v = 0; v < n; ++v) count += g.dist(u, v) == delta;
            if (count != 1) return;
          }
          out.push_back(g);
        });
  return out;
}

struct ExpansionCase {
  Graph graph;
  ClassDescriptor desc;
};

// Members for the expansion and extension checks: every member of A^3_1 on
// at most six vertices with a perfect matching, then `sampled` seeded
// members each for (5,1), (5,2) and the bipartite (4,4), the last padded.
inline std::vector<ExpansionCase> expansion_corpus(int sampled, std::uint64_t seed) {
  std::vector<ExpansionCase> out;
  const auto d3 = ClassDescriptor::make(3, 1);
  for (auto& g : members_with_perfect_matching(3, 1, 6)) out.push_back({std::move(g), d3});
  for (int K : {1, 2}) {
    const auto d = ClassDescriptor::make(5, K);
    for (auto& g : random_members(d, sampled, 1, 3, seed + K)) out.push_back({std::move(g), d});
  }
  const auto d4 = ClassDescriptor::make(4, 4);
  for (auto& g : random_members(d4, sampled, 1, 2, seed + 4)) out.push_back({antipodal::pad_bipartition(g, d4), d4});
  return out;
}

}  // namespace corpus
