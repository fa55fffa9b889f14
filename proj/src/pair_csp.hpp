#pragma once

// Constraint engine over the unordered pairs of a small vertex set. Each
// pair has a label domain (bit a set = label a allowed); constraints are
// "every triangle must be allowed". Used by the folded completions, the
// forbidden-cycle oracle and bipartition padding.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "antipodal/cherlin.hpp"

namespace antipodal::detail {

using LabelMask = std::uint32_t;

inline constexpr int kMaxCspLabel = 30;

inline LabelMask label_bit(int a) { return LabelMask{1} << a; }
LabelMask labels_between(int lo, int hi);

class TriangleTable {
 public:
  TriangleTable(int max_label, const std::function<bool(int, int, int)>& allowed);

  int max_label() const { return max_label_; }
  bool allowed(int a, int b, int c) const { return (third_[a * stride() + b] >> c) & 1U; }
  // Labels c with (a, b, c) allowed.
  LabelMask third(int a, int b) const { return third_[a * stride() + b]; }

 private:
  int stride() const { return max_label_ + 1; }
  int max_label_;
  std::vector<LabelMask> third_;
};

class PairCsp {
 public:
  PairCsp(int n, const TriangleTable& table);
  PairCsp(int n, TriangleTable&&) = delete;  // keeps a pointer to the table

  int size() const { return n_; }
  LabelMask domain(int u, int v) const { return dom_[index(u, v)]; }
  void restrict(int u, int v, LabelMask mask);
  void assign(int u, int v, int label) { restrict(u, v, label_bit(label)); }

  // Path consistency to the (unique) fixpoint. False when a domain empties.
  bool propagate();

  // Every domain a singleton and every triangle allowed.
  bool solved() const;

  // Ranks labels for canonical choices: lower rank preferred.
  using Preference = std::function<int(int)>;

  // Each pair independently takes its preferred label. Returns the label
  // matrix (n*n, 0 on the diagonal); does not check consistency.
  std::vector<int> select_simultaneous(const Preference& rank) const;
  bool consistent(const std::vector<int>& labels) const;

  // First solution of a depth-first search over pairs in lexicographic
  // order, labels tried by preference, with propagation after each choice.
  std::optional<std::vector<int>> backtrack(const Preference& rank) const;

  // Vertex permutation with a sign per vertex; pair (u, v) labelled a goes
  // to (image[u], image[v]) labelled a, or flip_sum - a when exactly one
  // of the two signs is set.
  struct SignedPermutation {
    std::vector<int> image;
    std::vector<bool> sign;
  };

  // Like backtrack, but only over solutions fixed by every element of
  // `group` (a group under composition). Each choice is copied along the
  // orbit of its pair, so the search is exhaustive for invariant solutions.
  std::optional<std::vector<int>> backtrack_invariant(const Preference& rank,
                                                      const std::vector<SignedPermutation>& group,
                                                      int flip_sum) const;

 private:
  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
  }
  std::optional<std::vector<int>> search(std::size_t pair_pos, const Preference& rank) const;
  std::optional<std::vector<int>> search_invariant(std::size_t pair_pos, const Preference& rank,
                                                   const std::vector<SignedPermutation>& group,
                                                   int flip_sum) const;
  std::vector<int> labels() const;

  int n_;
  const TriangleTable* table_;
  std::vector<LabelMask> dom_;
};

// Triangles allowed in a five-parameter class (metric and no clause fires).
TriangleTable general_table(const GeneralClassDescriptor& desc);

// Triangles (a, b, c) of folded labels whose four switchings
// (a,b,c), (a,d-b,d-c), (d-a,b,d-c), (d-a,d-b,c) are all allowed in the
// antipodal class with diameter d.
TriangleTable switching_table(const ClassDescriptor& desc);

// Prefers labels close to ceil((max_label + 1) / 2), ties to the smaller.
PairCsp::Preference centre_preference(int max_label);

// Rank |2a - delta|: unchanged by a -> delta - a.
PairCsp::Preference switch_symmetric_preference(int delta);

}  // namespace antipodal::detail
