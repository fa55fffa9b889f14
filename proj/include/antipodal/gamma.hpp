#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "antipodal/cherlin.hpp"
#include "antipodal/graph.hpp"

namespace antipodal {

class OrientationSet;

// A valuation function chi : D -> {0,1} over D = {0..m-1} (rendered 1-based
// in files). The first 64 bits live inline; larger index sets spill into a
// heap-allocated tail.
class Valuation {
 public:
  Valuation() = default;
  explicit Valuation(std::size_t size);
  // "0110" -> chi(1)=0, chi(2)=1, ...
  static Valuation parse(std::string_view bits);

  std::size_t size() const { return size_; }
  bool operator[](std::size_t i) const;
  void set(std::size_t i, bool value);
  void flip(std::size_t i) { set(i, !(*this)[i]); }

  Valuation complement() const;
  Valuation& operator^=(const Valuation& other);
  std::string to_string() const;

  friend bool operator==(const Valuation&, const Valuation&) = default;
  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b);

 private:
  std::uint64_t* word(std::size_t i);
  const std::uint64_t* word(std::size_t i) const;

  std::size_t size_ = 0;
  std::uint64_t head_ = 0;
  std::vector<std::uint64_t> tail_;
};

// A symmetric set F of index pairs; row(i) is the projection F_i as a mask.
class FlipSet {
 public:
  FlipSet() = default;
  explicit FlipSet(std::size_t m);

  std::size_t index_count() const { return rows_.size(); }
  bool contains(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  // Inserts (i,j) and (j,i).
  void insert(std::size_t i, std::size_t j);
  void toggle(std::size_t i, std::size_t j);
  const Valuation& row(std::size_t i) const { return rows_[i]; }
  bool empty() const;

  // Symmetric difference.
  FlipSet& operator^=(const FlipSet& other);

  friend bool operator==(const FlipSet&, const FlipSet&) = default;

 private:
  std::vector<Valuation> rows_;
};

using IndexPermutation = std::vector<int>;

// The index set D of a language, optionally split into D_1 (first_part[i])
// and D_2 for bipartite classes.
struct MarkLanguage {
  int index_count = 0;
  std::vector<bool> first_part;

  bool bipartite() const { return !first_part.empty(); }
  // Fixes or swaps (D_1, D_2) when bipartite; any bijection otherwise.
  bool admits(const IndexPermutation& psi) const;
  friend bool operator==(const MarkLanguage&, const MarkLanguage&) = default;
};

struct Mark {
  int index = 0;
  Valuation chi;
  friend bool operator==(const Mark&, const Mark&) = default;
  friend auto operator<=>(const Mark&, const Mark&) = default;
};

// Flip the positions in `flip` and then re-index by psi:
// result(psi(j)) = chi(j) xor flip(j).
Valuation flip_permute(const Valuation& chi, const Valuation& flip, const IndexPermutation& psi);

// Normal form alpha_psi^F: first flip the mutual valuations recorded in F,
// then permute D by psi. Acts as the identity on distances and M.
class LanguagePermutation {
 public:
  LanguagePermutation() = default;
  LanguagePermutation(IndexPermutation psi, FlipSet flips);
  static LanguagePermutation identity(std::size_t m);
  static LanguagePermutation flip_only(FlipSet flips);
  static LanguagePermutation permute_only(IndexPermutation psi);

  std::size_t index_count() const { return psi_.size(); }
  const IndexPermutation& psi() const { return psi_; }
  const FlipSet& flips() const { return flips_; }
  bool is_identity() const;

  Mark act(const Mark& mark) const;

  friend bool operator==(const LanguagePermutation&, const LanguagePermutation&) = default;

 private:
  IndexPermutation psi_;
  FlipSet flips_;
};

// g ∘ h (h acts first): psi = psi_g psi_h, F = psi_h^{-1}(F_g) Δ F_h.
LanguagePermutation compose(const LanguagePermutation& g, const LanguagePermutation& h);
// (psi^{-1}, psi(F)).
LanguagePermutation invert(const LanguagePermutation& g);
Mark act_on_mark(const LanguagePermutation& g, const Mark& mark);

// Visits every normal form admitted by the language (partition-preserving
// psi when bipartite, every symmetric F). Stops when visit returns false.
void for_each_language_permutation(const MarkLanguage& language,
                                   const std::function<bool(const LanguagePermutation&)>& visit);

std::string describe(const LanguagePermutation& g);

// An edge-labelled graph expanded by the unary function M (a partial
// involution) and at most one unary mark U_i^chi per vertex.
class GammaStructure {
 public:
  GammaStructure() = default;
  GammaStructure(Graph base, MarkLanguage language);

  const Graph& base() const { return base_; }
  const MarkLanguage& language() const { return language_; }
  int size() const { return base_.size(); }

  Vertex mate(Vertex v) const { return mates_[v]; }
  const std::vector<Vertex>& mates() const { return mates_; }
  const std::optional<Mark>& mark(Vertex v) const { return marks_[v]; }

  // pi(u) and chi(u); throw InputError when u carries no mark.
  int projection(Vertex u) const;
  const Valuation& valuation(Vertex u) const;

  void set_mates(Vertex u, Vertex v);
  void set_mark(Vertex v, Mark mark);
  void clear_mark(Vertex v) { marks_[v].reset(); }

  // Forgets marks and M.
  Graph reduct() const { return base_; }

  friend bool operator==(const GammaStructure&, const GammaStructure&) = default;

 private:
  Graph base_;
  MarkLanguage language_;
  std::vector<Vertex> mates_;
  std::vector<std::optional<Mark>> marks_;
};

// Smallest vertex set containing `seeds` closed under M.
std::vector<Vertex> closure(const GammaStructure& s, std::span<const Vertex> seeds);

// 0 when chi(u)(pi(v)) = chi(v)(pi(u)), 1 otherwise.
int f_from_marks(const GammaStructure& s, Vertex u, Vertex v);

// Expansion of a member whose delta-edges form a perfect matching:
// x_i in U_i^{chi_i}, y_i in U_i^{1-chi_i}, chi_i(j) = 1 iff i > j and
// d(x_i, x_j) is odd (or lies in O for the bipartite variant).
GammaStructure build_suitable_expansion(const Graph& a, const ClassDescriptor& desc,
                                        const OrientationSet* orientation = nullptr);

struct ExpansionCheck {
  bool ok = true;
  std::string failure;  // first failed condition, human readable
};

ExpansionCheck check_suitable_expansion(const GammaStructure& expanded, const Graph& c,
                                        const ClassDescriptor& desc,
                                        const OrientationSet* orientation = nullptr);
bool is_suitable_expansion(const GammaStructure& expanded, const Graph& c,
                           const ClassDescriptor& desc,
                           const OrientationSet* orientation = nullptr);

// D_1 derived from marks: indices whose vertices share the part of the
// first marked vertex. Empty for non-bipartite structures.
std::vector<bool> derive_index_partition(const GammaStructure& s);

// Adds delta-edges inside the smaller part of a bipartite member until both
// parts carry the same number of delta-edges.
Graph pad_bipartition(const Graph& a, const ClassDescriptor& desc);

}  // namespace antipodal
