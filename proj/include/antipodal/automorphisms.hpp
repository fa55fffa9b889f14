#pragma once

#include <functional>
#include <iterator>
#include <optional>
#include <span>
#include <vector>

#include "antipodal/graph.hpp"

namespace antipodal {

// Exhaustive automorphism enumeration refuses graphs above this size.
inline constexpr int kMaxEnumerationVertices = 12;

// Constraints for the backtracking isomorphism search beyond distances.
struct SearchConstraints {
  // Optional unary function (kUnmapped when undefined) that every solution
  // must commute with: g(F(v)) = F(g(v)).
  std::span<const Vertex> function;
  // Optional vertex compatibility filter: may v be sent to w?
  std::function<bool(Vertex, Vertex)> compatible;
  // Assignments every solution must contain (partial map on the host).
  const PartialMap* fixed = nullptr;
};

// Visits every automorphism satisfying `constraints` in lexicographic order
// of the image vector. The visitor returns false to stop early.
void for_each_automorphism(const Graph& g, const SearchConstraints& constraints,
                           const std::function<bool(const Permutation&)>& visit,
                           int max_vertices = kMaxEnumerationVertices);

// All distance-preserving bijections of g (identity first).
std::vector<Permutation> automorphisms(const Graph& g, int max_vertices = kMaxEnumerationVertices);

// Lexicographically least automorphism extending `partial`, if any.
std::optional<Permutation> least_extension(const Graph& g, const PartialMap& partial,
                                           const SearchConstraints& extra = {});

// Smallest set containing `seeds` and closed under the partial unary
// function (kUnmapped entries are undefined). Sorted.
std::vector<Vertex> closure(std::span<const Vertex> function, std::span<const Vertex> seeds);

// Lazily enumerates every isomorphism between induced substructures of a
// graph, including the empty map. The order is depth-first over vertices in
// id order, where each vertex is first left unmapped and then sent to each
// compatible target in increasing order.
class PartialAutomorphismCursor {
 public:
  explicit PartialAutomorphismCursor(const Graph& g);

  // Advances to the next map; false when exhausted.
  bool next();
  const PartialMap& current() const { return current_; }

 private:
  bool consistent(int level, Vertex target) const;

  const Graph* graph_;
  std::vector<Vertex> choice_;
  std::vector<bool> used_;
  PartialMap current_;
  bool started_ = false;
  bool done_ = false;
};

// Range adaptor over PartialAutomorphismCursor for range-for loops.
class PartialAutomorphisms {
 public:
  explicit PartialAutomorphisms(const Graph& g) : graph_(&g) {}

  class iterator {
   public:
    using value_type = PartialMap;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::input_iterator_tag;

    iterator() = default;
    explicit iterator(const Graph& g) : cursor_(std::in_place, g) { advance(); }

    const PartialMap& operator*() const { return cursor_->current(); }
    const PartialMap* operator->() const { return &cursor_->current(); }
    iterator& operator++() {
      advance();
      return *this;
    }
    void operator++(int) { advance(); }
    friend bool operator==(const iterator& a, const iterator& b) {
      return a.cursor_.has_value() == b.cursor_.has_value();
    }

   private:
    void advance() {
      if (!cursor_->next()) cursor_.reset();
    }
    std::optional<PartialAutomorphismCursor> cursor_;
  };

  iterator begin() const { return iterator(*graph_); }
  iterator end() const { return iterator(); }

 private:
  const Graph* graph_;
};

inline PartialAutomorphisms partial_automorphisms(const Graph& g) {
  return PartialAutomorphisms(g);
}

}  // namespace antipodal
