#pragma once

#include <optional>
#include <string>
#include <vector>

#include "antipodal/cherlin.hpp"
#include "antipodal/completion.hpp"
#include "antipodal/gamma.hpp"
#include "antipodal/graph.hpp"

namespace antipodal {

// A language permutation paired with a vertex map.
struct GammaPartialAutomorphism {
  LanguagePermutation lang;
  PartialMap vmap;
};

struct AuditResult {
  bool ok = true;
  std::string failure;
};

// Checks that `p` is a partial automorphism of `s`: injective, domain closed
// under M, distances and M respected, and mark(vmap(v)) = lang(mark(v)).
AuditResult audit_gamma_partial_automorphism(const GammaStructure& s, const GammaPartialAutomorphism& p);

// Closes the domain of phi under antipodes (mate(phi(v)) = phi(mate(v))).
// Throws InputError when phi is not a partial isomorphism or the closure
// would not be injective.
PartialMap close_under_mates(const GammaStructure& s, const PartialMap& phi);

// Extends a partial isomorphism of the base graph to a language-aware
// partial automorphism (lang, closed phi). psi follows phi on delta-edges and
// is completed order-preservingly (within parts, swapping parts only when phi
// does so, for bipartite languages). Flipping pairs record where phi
// disagrees with the stored valuations. The result is audited; an audit
// failure raises std::logic_error.
GammaPartialAutomorphism extend_partial_automorphism(const GammaStructure& expanded, const PartialMap& phi);

// Flipping-pair row computed from vertex v of the closed map: j is set iff
// chi(phi(v))(psi(j)) != chi(v)(j).
Valuation flipping_row(const GammaStructure& expanded, const PartialMap& closed_phi,
                       const IndexPermutation& psi, Vertex v);

inline constexpr int kMaxWitnessSource = 8;

struct WitnessReport {
  struct Counterexample {
    std::optional<LanguagePermutation> lang;
    PartialMap map;  // on the vertices of A
  };
  struct Extension {
    std::optional<LanguagePermutation> lang;
    PartialMap partial;       // on the vertices of A
    Permutation automorphism; // on the vertices of B
  };

  bool ok = true;
  std::optional<Counterexample> counterexample;
  std::vector<Extension> extension_table;
  long long partial_automorphisms_checked = 0;
};

// Vertex ids of A inside B, matched by name. Throws InputError when A is not
// an induced substructure of B.
std::vector<Vertex> embed_by_names(const Graph& a, const Graph& b);

// Every partial automorphism of a extends to an automorphism of b (the
// lexicographically least extension is recorded).
WitnessReport verify_eppa_witness(const Graph& a, const Graph& b);

// Language-aware variant: every pair (g_L, phi) with phi an M-closed partial
// isomorphism of a carrying marks per g_L extends to (g_L, theta) with theta
// an automorphism of b commuting with M and moving marks per g_L.
WitnessReport verify_eppa_witness(const GammaStructure& a, const GammaStructure& b);

// Every irreducible (complete) substructure of b is moved into a by some
// automorphism of b.
bool verify_irreducible_faithful(const Graph& a, const Graph& b);

inline constexpr int kMaxSearchVertices = 10;

// Smallest member of the class containing a, built from the antipodal
// closure of a plus new delta-edges, that is an EPPA-witness for a. Sizes
// are explored in increasing order and labels lexicographically, skipping
// candidates that only permute the new delta-edges.
std::optional<Graph> search_witness(const Graph& a, const ClassDescriptor& desc, int max_vertices);

// Same idea for an expanded structure: new delta-edges carry marks, labels
// obey the mark parity rule, and candidates must be suitable expansions.
std::optional<GammaStructure> search_gamma_witness(const GammaStructure& a_plus, const ClassDescriptor& desc,
                                                   int max_vertices,
                                                   const OrientationSet* orientation = nullptr);

struct PipelineSource {
  int search_bound = 8;
  std::optional<GammaStructure> supplied;  // used instead of the search when set
};

struct PipelineResult {
  enum class Failure { None, Input, NoWitness, VerifiedFalse };

  bool ok = false;
  Failure failure = Failure::None;
  std::string stage;  // last stage reached
  std::string diagnostic;
  Graph closed;
  std::optional<GammaStructure> expanded;
  std::optional<GammaStructure> witness;
  Graph reduct;
  WitnessReport gamma_report;
  WitnessReport plain_report;
};

// closure -> padding (bipartite) -> expansion -> witness -> language-aware
// verification -> reduct -> plain verification against a.
PipelineResult pipeline(const Graph& a, const ClassDescriptor& desc, const PipelineSource& source = {},
                        const OrientationSet* orientation = nullptr);

}  // namespace antipodal
