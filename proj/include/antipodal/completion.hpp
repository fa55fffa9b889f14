#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "antipodal/cherlin.hpp"
#include "antipodal/error.hpp"
#include "antipodal/graph.hpp"

namespace antipodal {

// A cycle v_1..v_k with labels[i] = d(v_i, v_{i+1}) (indices mod k).
struct CycleSpec {
  std::vector<Vertex> vertices;
  std::vector<int> labels;

  int length() const { return static_cast<int>(labels.size()); }
  std::string describe(const Graph& g) const;
};

class NonMetricCycleError : public NoCompletionError {
 public:
  NonMetricCycleError(const std::string& what, CycleSpec cycle)
      : NoCompletionError(what), cycle_(std::move(cycle)) {}
  const CycleSpec& cycle() const { return cycle_; }

 private:
  CycleSpec cycle_;
};

// A cycle whose closing label exceeds the sum of the others, found by
// comparing stored labels with all-pairs shortest paths. The first offending
// pair in lexicographic order is reported, closed by its shortest path.
std::optional<CycleSpec> find_non_metric_cycle(const Graph& g);

// d'(x, y) = length of a shortest path. Throws NonMetricCycleError when a
// stored label is longer than some path, InputError when disconnected. The
// result's delta is raised if shortest paths exceed the input delta.
Graph shortest_path_completion(const Graph& g);

inline constexpr int kDefaultCycleBound = 8;

// True iff no labelling of the chords of the cycle yields a complete member
// of the class (exhaustive search with propagation).
bool forbidden_cycle_oracle(std::span<const int> labels, const GeneralClassDescriptor& desc,
                            int max_length = kDefaultCycleBound);

struct LocalFinitenessBound {
  int n = 4;                     // max(4, 2 * largest)
  int largest_forbidden_cycle = 0;  // 0 when none up to the bound
  int cycle_bound = 0;
  bool exhaustive = true;        // every cycle up to cycle_bound was checked
  std::vector<std::vector<int>> minimal_cycles;  // canonical label sequences
};

// Sweeps every label sequence up to the bound (one per rotation/reflection
// class) for minimal forbidden cycles: forbidden, while dropping any single
// edge leaves a completable path.
LocalFinitenessBound local_finiteness_bound(const ClassDescriptor& desc, int cycle_bound);
LocalFinitenessBound local_finiteness_bound(const GeneralClassDescriptor& desc, int cycle_bound);

// Total map from unordered vertex pairs to {0,1}.
class ParityFunction {
 public:
  ParityFunction() = default;
  explicit ParityFunction(int n) : n_(n), bits_(static_cast<std::size_t>(n) * n, 0) {}

  int size() const { return n_; }
  int operator()(Vertex u, Vertex v) const { return bits_[index(u, v)]; }
  ParityFunction& set(Vertex u, Vertex v, int bit);

  friend bool operator==(const ParityFunction&, const ParityFunction&) = default;

 private:
  std::size_t index(Vertex u, Vertex v) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
  }
  int n_ = 0;
  std::vector<unsigned char> bits_;
};

// O ⊆ {0..delta}: delta ∈ O and exactly one of a, delta-a for a != delta/2.
class OrientationSet {
 public:
  OrientationSet(int delta, std::vector<int> members);
  // {a : delta/2 <= a <= delta}.
  static OrientationSet upper_half(int delta);
  // Odd labels; only valid for odd delta.
  static OrientationSet odd(int delta);
  // odd(delta) for odd delta, upper_half(delta) otherwise.
  static OrientationSet standard(int delta);

  int delta() const { return delta_; }
  bool contains(int a) const { return a >= 0 && a <= delta_ && member_[a]; }
  // a ∈ delta - O.
  bool contains_complement(int a) const { return contains(delta_ - a); }
  std::vector<int> members() const;

 private:
  int delta_;
  std::vector<bool> member_;
};

// f-parity clause for one edge: f = 1 needs d ∈ O, f = 0 needs d ∈ delta-O.
bool parity_clause_holds(int f, int label, const OrientationSet& orientation);

struct FViolation {
  enum class Clause {
    EdgeParity,     // f disagrees with a label
    MatchedSame,    // f(u1 u2) != f(v1 v2)
    MatchedCross,   // f(u1 v2) != f(u2 v1)
    MatchedDiffer,  // f(u1 u2) == f(u1 v2)
  };
  Clause clause;
  std::vector<Vertex> vertices;
  std::string describe(const Graph& g) const;
};

// Orientation defaults to OrientationSet::standard(delta).
std::vector<FViolation> check_f_conditions(const Graph& g, const ParityFunction& f,
                                           const ClassDescriptor& desc,
                                           const OrientationSet* orientation = nullptr);

struct CompletionOptions {
  int cycle_bound = kDefaultCycleBound;
  bool verify_equivariance = true;
};

// Completes g into a member of the class such that every edge satisfies the
// f-parity clause and every f-preserving automorphism of g survives.
// Requires: delta-edges a perfect matching, antipodal consistency around
// each delta-edge, no forbidden cycle in the folded image (up to
// cycle_bound), f satisfying check_f_conditions. Violations raise
// PreconditionError; failure to complete raises NoCompletionError.
Graph antipodal_complete(const Graph& g, const ParityFunction& f, const ClassDescriptor& desc,
                         const OrientationSet* orientation = nullptr,
                         const CompletionOptions& options = {});

// The precondition diagnostics antipodal_complete would raise (empty when
// all hold).
std::vector<std::string> antipodal_completion_diagnostics(
    const Graph& g, const ParityFunction& f, const ClassDescriptor& desc,
    const OrientationSet* orientation = nullptr, int cycle_bound = kDefaultCycleBound);

// Canonical completion of a partial graph inside a five-parameter class:
// propagate, pick centre-most candidates, verify, backtrack on failure.
// Empty when no completion exists.
std::optional<Graph> complete_folded(const Graph& h, const GeneralClassDescriptor& desc);

}  // namespace antipodal
