#include "antipodal/gamma.hpp"

#include <algorithm>
#include <numeric>

#include "antipodal/automorphisms.hpp"
#include "antipodal/completion.hpp"
#include "antipodal/error.hpp"
#include "pair_csp.hpp"

namespace antipodal {

namespace {

constexpr std::size_t kWordBits = 64;

std::string one_based(std::size_t i) { return std::to_string(i + 1); }

}  // namespace

Valuation::Valuation(std::size_t size) : size_(size) {
  if (size > kWordBits) tail_.assign((size - kWordBits + kWordBits - 1) / kWordBits, 0);
}

Valuation Valuation::parse(std::string_view bits) {
  Valuation v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw InputError("valuation must be a string of 0/1, got '" + std::string(bits) + "'");
    }
    v.set(i, bits[i] == '1');
  }
  return v;
}

std::uint64_t* Valuation::word(std::size_t i) {
  return i < kWordBits ? &head_ : &tail_[(i - kWordBits) / kWordBits];
}

const std::uint64_t* Valuation::word(std::size_t i) const {
  return i < kWordBits ? &head_ : &tail_[(i - kWordBits) / kWordBits];
}

bool Valuation::operator[](std::size_t i) const {
  if (i >= size_) throw std::out_of_range("valuation index out of range");
  return (*word(i) >> (i % kWordBits)) & 1U;
}

void Valuation::set(std::size_t i, bool value) {
  if (i >= size_) throw std::out_of_range("valuation index out of range");
  const std::uint64_t bit = std::uint64_t{1} << (i % kWordBits);
  if (value) {
    *word(i) |= bit;
  } else {
    *word(i) &= ~bit;
  }
}

Valuation Valuation::complement() const {
  Valuation out(size_);
  for (std::size_t i = 0; i < size_; ++i) out.set(i, !(*this)[i]);
  return out;
}

Valuation& Valuation::operator^=(const Valuation& other) {
  if (other.size_ != size_) throw InputError("valuations over different index sets");
  head_ ^= other.head_;
  for (std::size_t w = 0; w < tail_.size(); ++w) tail_[w] ^= other.tail_[w];
  return *this;
}

std::string Valuation::to_string() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if ((*this)[i]) out[i] = '1';
  }
  return out;
}

std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
  const std::size_t n = std::min(a.size_, b.size_);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return a[i] ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return a.size_ <=> b.size_;
}

FlipSet::FlipSet(std::size_t m) : rows_(m, Valuation(m)) {}

void FlipSet::insert(std::size_t i, std::size_t j) {
  rows_.at(i).set(j, true);
  rows_.at(j).set(i, true);
}

void FlipSet::toggle(std::size_t i, std::size_t j) {
  rows_.at(i).flip(j);
  if (i != j) rows_.at(j).flip(i);
}

bool FlipSet::empty() const {
  return std::all_of(rows_.begin(), rows_.end(), [](const Valuation& r) { return r == Valuation(r.size()); });
}

FlipSet& FlipSet::operator^=(const FlipSet& other) {
  if (other.index_count() != index_count()) throw InputError("flip sets over different index sets");
  for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] ^= other.rows_[i];
  return *this;
}

bool MarkLanguage::admits(const IndexPermutation& psi) const {
  if (static_cast<int>(psi.size()) != index_count) return false;
  std::vector<bool> seen(psi.size(), false);
  for (int p : psi) {
    if (p < 0 || p >= index_count || seen[p]) return false;
    seen[p] = true;
  }
  if (!bipartite()) return true;
  bool fixes = true, swaps = true;
  for (int i = 0; i < index_count; ++i) {
    if (first_part[psi[i]] == first_part[i]) {
      swaps = false;
    } else {
      fixes = false;
    }
  }
  return fixes || swaps;
}

Valuation flip_permute(const Valuation& chi, const Valuation& flip, const IndexPermutation& psi) {
  if (flip.size() != chi.size() || psi.size() != chi.size()) {
    throw InputError("valuation, flip and permutation must share the index set");
  }
  Valuation out(chi.size());
  for (std::size_t j = 0; j < chi.size(); ++j) out.set(psi[j], chi[j] != flip[j]);
  return out;
}

LanguagePermutation::LanguagePermutation(IndexPermutation psi, FlipSet flips)
    : psi_(std::move(psi)), flips_(std::move(flips)) {
  if (flips_.index_count() != psi_.size()) throw InputError("psi and F over different index sets");
  if (!MarkLanguage{static_cast<int>(psi_.size()), {}}.admits(psi_)) {
    throw InputError("psi is not a permutation of the index set");
  }
}

LanguagePermutation LanguagePermutation::identity(std::size_t m) {
  IndexPermutation psi(m);
  std::iota(psi.begin(), psi.end(), 0);
  return LanguagePermutation(std::move(psi), FlipSet(m));
}

LanguagePermutation LanguagePermutation::flip_only(FlipSet flips) {
  auto id = identity(flips.index_count());
  return LanguagePermutation(id.psi_, std::move(flips));
}

LanguagePermutation LanguagePermutation::permute_only(IndexPermutation psi) {
  const std::size_t m = psi.size();
  return LanguagePermutation(std::move(psi), FlipSet(m));
}

bool LanguagePermutation::is_identity() const {
  for (std::size_t i = 0; i < psi_.size(); ++i) {
    if (psi_[i] != static_cast<int>(i)) return false;
  }
  return flips_.empty();
}

Mark LanguagePermutation::act(const Mark& mark) const {
  if (mark.index < 0 || static_cast<std::size_t>(mark.index) >= psi_.size()) {
    throw InputError("mark index outside the index set");
  }
  return Mark{psi_[mark.index], flip_permute(mark.chi, flips_.row(mark.index), psi_)};
}

LanguagePermutation compose(const LanguagePermutation& g, const LanguagePermutation& h) {
  const std::size_t m = g.index_count();
  if (h.index_count() != m) throw InputError("composing language permutations over different index sets");
  IndexPermutation psi(m);
  for (std::size_t i = 0; i < m; ++i) psi[i] = g.psi()[h.psi()[i]];
  FlipSet flips = h.flips();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      if (g.flips().contains(h.psi()[i], h.psi()[j])) flips.toggle(i, j);
    }
  }
  return LanguagePermutation(std::move(psi), std::move(flips));
}

LanguagePermutation invert(const LanguagePermutation& g) {
  const std::size_t m = g.index_count();
  IndexPermutation psi(m);
  for (std::size_t i = 0; i < m; ++i) psi[g.psi()[i]] = static_cast<int>(i);
  FlipSet flips(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (g.flips().contains(i, j)) flips.insert(g.psi()[i], g.psi()[j]);
    }
  }
  return LanguagePermutation(std::move(psi), std::move(flips));
}

Mark act_on_mark(const LanguagePermutation& g, const Mark& mark) { return g.act(mark); }

namespace {

constexpr int kMaxLanguageEnumeration = 6;

}  // namespace

void for_each_language_permutation(const MarkLanguage& language,
                                   const std::function<bool(const LanguagePermutation&)>& visit) {
  const int m = language.index_count;
  if (m > kMaxLanguageEnumeration) {
    throw SizeLimitError("language permutation enumeration refused for " + std::to_string(m) +
                             " indices",
                         kMaxLanguageEnumeration);
  }
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) slots.emplace_back(i, j);
  }
  IndexPermutation psi(m);
  std::iota(psi.begin(), psi.end(), 0);
  do {
    if (!language.admits(psi)) continue;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
      FlipSet flips(m);
      for (std::size_t s = 0; s < slots.size(); ++s) {
        if ((mask >> s) & 1U) flips.insert(slots[s].first, slots[s].second);
      }
      if (!visit(LanguagePermutation(psi, std::move(flips)))) return;
    }
  } while (std::next_permutation(psi.begin(), psi.end()));
}

std::string describe(const LanguagePermutation& g) {
  std::string out = "psi=[";
  for (std::size_t i = 0; i < g.psi().size(); ++i) {
    if (i) out += ' ';
    out += one_based(g.psi()[i]);
  }
  out += "] F={";
  bool first = true;
  for (std::size_t i = 0; i < g.index_count(); ++i) {
    for (std::size_t j = 0; j < g.index_count(); ++j) {
      if (!g.flips().contains(i, j)) continue;
      if (!first) out += ',';
      first = false;
      out += "(" + one_based(i) + "," + one_based(j) + ")";
    }
  }
  return out + "}";
}

GammaStructure::GammaStructure(Graph base, MarkLanguage language)
    : base_(std::move(base)),
      language_(std::move(language)),
      mates_(base_.size(), PartialMap::kUnmapped),
      marks_(base_.size()) {
  if (language_.bipartite() && static_cast<int>(language_.first_part.size()) != language_.index_count) {
    throw InputError("index partition does not cover the index set");
  }
}

int GammaStructure::projection(Vertex u) const {
  if (!marks_.at(u)) throw InputError("vertex " + base_.name(u) + " carries no mark");
  return marks_[u]->index;
}

const Valuation& GammaStructure::valuation(Vertex u) const {
  if (!marks_.at(u)) throw InputError("vertex " + base_.name(u) + " carries no mark");
  return marks_[u]->chi;
}

void GammaStructure::set_mates(Vertex u, Vertex v) {
  if (u < 0 || v < 0 || u >= size() || v >= size() || u == v) {
    throw InputError("mates must be two distinct vertices");
  }
  for (Vertex w : {u, v}) {
    if (mates_[w] != PartialMap::kUnmapped) mates_[mates_[w]] = PartialMap::kUnmapped;
  }
  mates_[u] = v;
  mates_[v] = u;
}

void GammaStructure::set_mark(Vertex v, Mark mark) {
  if (v < 0 || v >= size()) throw InputError("mark on unknown vertex");
  if (mark.index < 0 || mark.index >= language_.index_count) {
    throw InputError("mark index " + one_based(static_cast<std::size_t>(std::max(mark.index, 0))) +
                     " outside {1.." + std::to_string(language_.index_count) + "}");
  }
  if (static_cast<int>(mark.chi.size()) != language_.index_count) {
    throw InputError("valuation length " + std::to_string(mark.chi.size()) + " differs from " +
                     std::to_string(language_.index_count) + " indices");
  }
  marks_[v] = std::move(mark);
}

std::vector<Vertex> closure(const GammaStructure& s, std::span<const Vertex> seeds) {
  return closure(std::span<const Vertex>(s.mates()), seeds);
}

int f_from_marks(const GammaStructure& s, Vertex u, Vertex v) {
  return s.valuation(u)[s.projection(v)] == s.valuation(v)[s.projection(u)] ? 0 : 1;
}

namespace {

OrientationSet orientation_or_standard(const ClassDescriptor& desc, const OrientationSet* orientation) {
  if (orientation) {
    if (orientation->delta() != desc.delta) throw InputError("orientation set built for another delta");
    return *orientation;
  }
  return OrientationSet::standard(desc.delta);
}

}  // namespace

GammaStructure build_suitable_expansion(const Graph& a, const ClassDescriptor& desc,
                                        const OrientationSet* orientation) {
  if (a.delta() != desc.delta) throw InputError("graph delta does not match class delta");
  const auto report = check_membership(a, desc);
  if (!report.member) throw InputError("expansion needs a member: " + report.diagnostic);
  const auto matching = delta_matching(a);
  if (!matching.perfect()) {
    throw InputError("expansion needs a perfect matching of delta-edges; run the antipodal closure first");
  }
  const OrientationSet o = orientation_or_standard(desc, orientation);
  const int m = matching.size();

  MarkLanguage language{m, {}};
  if (desc.variant == Variant::EvenBipartite) {
    language.first_part = matching.first_part;
    const auto d1 = std::count(language.first_part.begin(), language.first_part.end(), true);
    if (2 * d1 != m) {
      throw InputError("unbalanced bipartition (" + std::to_string(d1) + " vs " +
                       std::to_string(m - d1) + " delta-edges); run pad_bipartition first");
    }
  }

  GammaStructure out(a, language);
  for (int i = 0; i < m; ++i) {
    const auto [x, y] = matching.edges[i];
    Valuation chi(m);
    for (int j = 0; j < i; ++j) {
      if (o.contains(a.dist(x, matching.edges[j].first))) chi.set(j, true);
    }
    out.set_mates(x, y);
    out.set_mark(y, Mark{i, chi.complement()});
    out.set_mark(x, Mark{i, std::move(chi)});
  }
  return out;
}

ExpansionCheck check_suitable_expansion(const GammaStructure& expanded, const Graph& c,
                                        const ClassDescriptor& desc, const OrientationSet* orientation) {
  auto fail = [](std::string why) { return ExpansionCheck{false, std::move(why)}; };
  const Graph& base = expanded.base();
  if (base.names() != c.names()) return fail("condition 1: vertex sets differ");
  if (!c.is_complete()) return fail("structure is not complete");
  const int n = c.size();
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (base.dist(u, v) != c.dist(u, v)) {
        return fail("condition 2: distance differs on " + describe_pair(c, u, v));
      }
    }
  }
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      if (u == v) continue;
      if ((expanded.mate(u) == v) != (c.dist(u, v) == desc.delta)) {
        return fail("condition 3: M disagrees with delta-edges at " + describe_pair(c, u, v));
      }
    }
  }
  for (Vertex u = 0; u < n; ++u) {
    if (!expanded.mark(u)) return fail("condition 4: " + c.name(u) + " carries no mark");
  }
  for (Vertex u = 0; u < n; ++u) {
    const Vertex v = expanded.mate(u);
    if (v == PartialMap::kUnmapped) continue;
    if (expanded.projection(v) != expanded.projection(u) ||
        expanded.valuation(v) != expanded.valuation(u).complement()) {
      return fail("condition 5: antipode mark rule fails on " + describe_pair(c, u, v));
    }
  }
  const OrientationSet o = orientation_or_standard(desc, orientation);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (!parity_clause_holds(f_from_marks(expanded, u, v), c.dist(u, v), o)) {
        return fail("condition 6: marks disagree with distance " + std::to_string(c.dist(u, v)) +
                    " on " + describe_pair(c, u, v));
      }
    }
  }
  if (desc.variant == Variant::EvenBipartite) {
    const auto& first = expanded.language().first_part;
    if (first.empty()) return fail("condition 7: language carries no index partition");
    if (!has_consistent_bipartition(c)) return fail("condition 7: structure is not bipartite");
    const auto part = bipartition(c);
    bool same = true, swapped = true;
    for (Vertex v = 0; v < n; ++v) {
      const bool in_p1 = first[expanded.projection(v)];
      const bool in_q1 = part[v] == 0;
      if (in_p1 != in_q1) same = false;
      if (in_p1 == in_q1) swapped = false;
    }
    if (!same && !swapped) return fail("condition 7: index partition does not match the parts");
  }
  return {};
}

bool is_suitable_expansion(const GammaStructure& expanded, const Graph& c, const ClassDescriptor& desc,
                           const OrientationSet* orientation) {
  return check_suitable_expansion(expanded, c, desc, orientation).ok;
}

std::vector<bool> derive_index_partition(const GammaStructure& s) {
  const Graph& g = s.base();
  if (g.delta() % 2 != 0 || !has_consistent_bipartition(g)) return {};
  const auto part = bipartition(g);
  std::vector<bool> first(s.language().index_count, false);
  std::optional<int> reference;
  for (Vertex v = 0; v < g.size(); ++v) {
    if (!s.mark(v)) continue;
    if (!reference) reference = part[v];
    first[s.projection(v)] = part[v] == *reference;
  }
  return first;
}

Graph pad_bipartition(const Graph& a, const ClassDescriptor& desc) {
  if (desc.variant != Variant::EvenBipartite) throw InputError("pad_bipartition needs the even-bipartite variant");
  if (a.delta() != desc.delta) throw InputError("graph delta does not match class delta");
  const auto report = check_membership(a, desc);
  if (!report.member) throw InputError("padding needs a member: " + report.diagnostic);
  const auto matching = delta_matching(a);
  if (!matching.perfect()) throw InputError("padding needs a perfect matching of delta-edges");
  const int m = matching.size();
  const int d1 = static_cast<int>(std::count(matching.first_part.begin(), matching.first_part.end(), true));
  const int d2 = m - d1;
  if (d1 == d2) return a;

  // New pairs go into the part with fewer delta-edges; part 0 holds vertex 0.
  const int target_part = d1 < d2 ? 0 : 1;
  const int extra = std::abs(d1 - d2);
  const int delta = desc.delta;
  const auto part = bipartition(a);

  const auto table = detail::switching_table(desc);
  detail::PairCsp csp(m + extra, table);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      csp.assign(i, j, a.dist(matching.edges[i].first, matching.edges[j].first));
    }
  }
  detail::LabelMask odd = 0, even = 0;
  for (int l = 1; l < delta; ++l) (l % 2 ? odd : even) |= detail::label_bit(l);
  for (int t = m; t < m + extra; ++t) {
    for (int j = 0; j < m; ++j) {
      csp.restrict(t, j, part[matching.edges[j].first] == target_part ? even : odd);
    }
    for (int s = t + 1; s < m + extra; ++s) csp.restrict(t, s, even);
  }
  const auto labels = csp.backtrack(detail::centre_preference(delta - 1));
  if (!labels) {
    throw NoCompletionError("cannot add " + std::to_string(extra) +
                            " delta-edges to the smaller part within the class");
  }
  const int width = m + extra;
  auto folded = [&](int i, int j) { return (*labels)[static_cast<std::size_t>(i) * width + j]; };

  GraphBuilder b(a);
  std::vector<std::pair<Vertex, Vertex>> added;
  int counter = 0;
  for (int t = 0; t < extra; ++t) {
    std::string name;
    do {
      name = "p" + std::to_string(++counter);
    } while (b.view().find(name) || b.view().find(name + "*"));
    const Vertex p = b.add_vertex(name);
    const Vertex q = b.add_vertex(name + "*");
    added.emplace_back(p, q);
  }
  for (int t = 0; t < extra; ++t) {
    const auto [p, q] = added[t];
    b.set(p, q, delta);
    for (int j = 0; j < m; ++j) {
      const int l = folded(m + t, j);
      const auto [x, y] = matching.edges[j];
      b.set(p, x, l);
      b.set(p, y, delta - l);
      b.set(q, x, delta - l);
      b.set(q, y, l);
    }
    for (int s = t + 1; s < extra; ++s) {
      const int l = folded(m + t, m + s);
      const auto [p2, q2] = added[s];
      b.set(p, p2, l);
      b.set(q, q2, l);
      b.set(p, q2, delta - l);
      b.set(q, p2, delta - l);
    }
  }
  Graph padded = std::move(b).build();
  const auto padded_report = check_membership(padded, desc);
  if (!padded_report.member) throw std::logic_error("padding left the class: " + padded_report.diagnostic);
  return padded;
}

}  // namespace antipodal
