#include "antipodal/eppa.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "antipodal/automorphisms.hpp"
#include "antipodal/error.hpp"
#include "pair_csp.hpp"

namespace antipodal {

PartialMap close_under_mates(const GammaStructure& s, const PartialMap& phi) {
  const Graph& g = s.base();
  if (phi.host_size() != g.size()) throw InputError("map does not match the structure");
  if (!is_partial_isomorphism(g, phi)) throw InputError("map is not distance-preserving");
  PartialMap closed = phi;
  for (Vertex v : phi.domain()) {
    const Vertex w = s.mate(v);
    if (w == PartialMap::kUnmapped) continue;
    const Vertex target = s.mate(phi(v));
    if (target == PartialMap::kUnmapped) {
      throw InputError("image of " + g.name(v) + " has no antipode");
    }
    if (closed.defined(w) && closed(w) != target) {
      throw InputError("map disagrees with antipodes on " + describe_pair(g, v, w));
    }
    closed.set(w, target);
  }
  if (!closed.is_injective() || !is_partial_isomorphism(g, closed)) {
    throw InputError("map does not extend to antipodes");
  }
  return closed;
}

Valuation flipping_row(const GammaStructure& expanded, const PartialMap& closed_phi, const IndexPermutation& psi,
                       Vertex v) {
  const Valuation& before = expanded.valuation(v);
  const Valuation& after = expanded.valuation(closed_phi(v));
  Valuation row(before.size());
  for (std::size_t j = 0; j < before.size(); ++j) row.set(j, after[psi[j]] != before[j]);
  return row;
}

AuditResult audit_gamma_partial_automorphism(const GammaStructure& s, const GammaPartialAutomorphism& p) {
  auto fail = [](std::string why) { return AuditResult{false, std::move(why)}; };
  const Graph& g = s.base();
  const PartialMap& phi = p.vmap;
  if (phi.host_size() != g.size()) return fail("map does not match the structure");
  if (!phi.is_injective()) return fail("map is not injective");
  if (static_cast<int>(p.lang.index_count()) != s.language().index_count) {
    return fail("language permutation over another index set");
  }
  const auto dom = phi.domain();
  for (Vertex v : dom) {
    const Vertex w = s.mate(v);
    const Vertex fw = s.mate(phi(v));
    if ((w == PartialMap::kUnmapped) != (fw == PartialMap::kUnmapped)) {
      return fail("M not respected at " + g.name(v));
    }
    if (w != PartialMap::kUnmapped && (!phi.defined(w) || phi(w) != fw)) {
      return fail("domain not closed under M or M not respected at " + g.name(v));
    }
  }
  for (std::size_t a = 0; a < dom.size(); ++a) {
    for (std::size_t b = a + 1; b < dom.size(); ++b) {
      if (g.dist(dom[a], dom[b]) != g.dist(phi(dom[a]), phi(dom[b]))) {
        return fail("distance not preserved on " + describe_pair(g, dom[a], dom[b]));
      }
    }
  }
  for (Vertex v : dom) {
    const auto& from = s.mark(v);
    const auto& to = s.mark(phi(v));
    if (from.has_value() != to.has_value()) return fail("mark presence differs at " + g.name(v));
    if (from && p.lang.act(*from) != *to) {
      return fail("mark of " + g.name(phi(v)) + " is not the image of the mark of " + g.name(v));
    }
  }
  return {};
}

GammaPartialAutomorphism extend_partial_automorphism(const GammaStructure& expanded, const PartialMap& phi) {
  const PartialMap closed = close_under_mates(expanded, phi);
  const MarkLanguage& language = expanded.language();
  const int m = language.index_count;
  const auto dom = closed.domain();

  IndexPermutation psi(m, -1);
  std::vector<bool> used(m, false);
  std::vector<Vertex> witness(m, PartialMap::kUnmapped);  // smallest domain vertex per index
  for (Vertex v : dom) {
    const int i = expanded.projection(v);
    const int t = expanded.projection(closed(v));
    if (psi[i] >= 0 && psi[i] != t) throw InputError("map splits a delta-edge across indices");
    psi[i] = t;
    used[t] = true;
    if (witness[i] == PartialMap::kUnmapped) witness[i] = v;
  }

  auto fill = [&](const std::function<bool(int)>& source_in, const std::function<bool(int)>& target_in) {
    std::vector<int> sources, targets;
    for (int i = 0; i < m; ++i) {
      if (psi[i] < 0 && source_in(i)) sources.push_back(i);
      if (!used[i] && target_in(i)) targets.push_back(i);
    }
    if (sources.size() != targets.size()) {
      throw InputError("index parts have different sizes; psi cannot be completed");
    }
    for (std::size_t k = 0; k < sources.size(); ++k) {
      psi[sources[k]] = targets[k];
      used[targets[k]] = true;
    }
  };
  if (language.bipartite()) {
    bool swap = false;
    for (int i = 0; i < m; ++i) {
      if (psi[i] >= 0 && language.first_part[i] != language.first_part[psi[i]]) swap = true;
    }
    for (bool part : {true, false}) {
      fill([&](int i) { return language.first_part[i] == part; },
           [&](int t) { return language.first_part[t] == (swap ? !part : part); });
    }
  } else {
    fill([](int) { return true; }, [](int) { return true; });
  }
  if (!language.admits(psi)) throw std::logic_error("psi does not respect the index partition");

  FlipSet flips(m);
  for (int i = 0; i < m; ++i) {
    if (witness[i] == PartialMap::kUnmapped) continue;
    const Valuation row = flipping_row(expanded, closed, psi, witness[i]);
    for (int j = 0; j < m; ++j) {
      if (row[j]) flips.insert(i, j);
    }
  }
  GammaPartialAutomorphism out{LanguagePermutation(std::move(psi), std::move(flips)), closed};
  const auto audit = audit_gamma_partial_automorphism(expanded, out);
  if (!audit.ok) throw std::logic_error("extension failed its audit: " + audit.failure);
  return out;
}

std::vector<Vertex> embed_by_names(const Graph& a, const Graph& b) {
  std::vector<Vertex> emb(a.size());
  for (Vertex v = 0; v < a.size(); ++v) {
    auto found = b.find(a.name(v));
    if (!found) throw InputError("vertex " + a.name(v) + " of the source is missing from the witness");
    emb[v] = *found;
  }
  for (Vertex u = 0; u < a.size(); ++u) {
    for (Vertex v = u + 1; v < a.size(); ++v) {
      if (a.dist(u, v) != b.dist(emb[u], emb[v])) {
        throw InputError("source is not an induced substructure of the witness (at " + describe_pair(a, u, v) + ")");
      }
    }
  }
  return emb;
}

namespace {

void check_sizes(int a, int b) {
  if (a > kMaxWitnessSource) {
    throw SizeLimitError("witness verification refused for a source of " + std::to_string(a) + " vertices",
                         kMaxWitnessSource);
  }
  if (b > kMaxEnumerationVertices) {
    throw SizeLimitError("witness verification refused for a witness of " + std::to_string(b) + " vertices",
                         kMaxEnumerationVertices);
  }
}

PartialMap transport(const PartialMap& phi, const std::vector<Vertex>& emb, int host) {
  PartialMap out(host);
  for (Vertex v : phi.domain()) out.set(emb[v], emb[phi(v)]);
  return out;
}

bool respects_mates(const GammaStructure& s, const PartialMap& phi) {
  for (Vertex v : phi.domain()) {
    const Vertex w = s.mate(v);
    const Vertex fw = s.mate(phi(v));
    if ((w == PartialMap::kUnmapped) != (fw == PartialMap::kUnmapped)) return false;
    if (w != PartialMap::kUnmapped && (!phi.defined(w) || phi(w) != fw)) return false;
  }
  return true;
}

}  // namespace

WitnessReport verify_eppa_witness(const Graph& a, const Graph& b) {
  check_sizes(a.size(), b.size());
  const auto emb = embed_by_names(a, b);
  WitnessReport report;
  PartialAutomorphismCursor cursor(a);
  while (cursor.next()) {
    const PartialMap& phi = cursor.current();
    ++report.partial_automorphisms_checked;
    const PartialMap mapped = transport(phi, emb, b.size());
    auto ext = least_extension(b, mapped);
    if (!ext) {
      report.ok = false;
      report.counterexample = WitnessReport::Counterexample{std::nullopt, phi};
      report.extension_table.clear();
      return report;
    }
    report.extension_table.push_back({std::nullopt, phi, std::move(*ext)});
  }
  return report;
}

WitnessReport verify_eppa_witness(const GammaStructure& a, const GammaStructure& b) {
  check_sizes(a.size(), b.size());
  if (!(a.language() == b.language())) throw InputError("source and witness use different languages");
  const auto emb = embed_by_names(a.base(), b.base());
  for (Vertex v = 0; v < a.size(); ++v) {
    if (a.mark(v) != b.mark(emb[v])) throw InputError("mark of " + a.base().name(v) + " differs in the witness");
    const Vertex am = a.mate(v);
    const Vertex bm = b.mate(emb[v]);
    if ((am == PartialMap::kUnmapped) != (bm == PartialMap::kUnmapped) ||
        (am != PartialMap::kUnmapped && emb[am] != bm)) {
      throw InputError("M on " + a.base().name(v) + " differs in the witness");
    }
  }

  WitnessReport report;
  const Graph& ga = a.base();
  const int nb = b.size();
  PartialAutomorphismCursor cursor(ga);
  while (cursor.next() && report.ok) {
    const PartialMap& phi = cursor.current();
    if (!respects_mates(a, phi)) continue;
    const PartialMap mapped = transport(phi, emb, nb);
    for_each_language_permutation(a.language(), [&](const LanguagePermutation& g) {
      for (Vertex v : phi.domain()) {
        const auto& from = a.mark(v);
        const auto& to = a.mark(phi(v));
        if (from.has_value() != to.has_value()) return true;
        if (from && g.act(*from) != *to) return true;
      }
      ++report.partial_automorphisms_checked;
      std::vector<std::optional<Mark>> wanted(nb);
      for (Vertex v = 0; v < nb; ++v) {
        if (b.mark(v)) wanted[v] = g.act(*b.mark(v));
      }
      SearchConstraints c;
      c.function = b.mates();
      c.compatible = [&](Vertex v, Vertex t) { return wanted[v] == b.mark(t); };
      auto ext = least_extension(b.base(), mapped, c);
      if (!ext) {
        report.ok = false;
        report.counterexample = WitnessReport::Counterexample{g, phi};
        report.extension_table.clear();
        return false;
      }
      report.extension_table.push_back({g, phi, std::move(*ext)});
      return true;
    });
  }
  return report;
}

bool verify_irreducible_faithful(const Graph& a, const Graph& b) {
  check_sizes(a.size(), b.size());
  const auto emb = embed_by_names(a, b);
  std::vector<bool> in_a(b.size(), false);
  for (Vertex v : emb) in_a[v] = true;
  const auto autos = automorphisms(b);
  const int n = b.size();
  for (std::uint32_t subset = 1; subset < (std::uint32_t{1} << n); ++subset) {
    std::vector<Vertex> c;
    for (Vertex v = 0; v < n; ++v) {
      if ((subset >> v) & 1U) c.push_back(v);
    }
    bool clique = true;
    for (std::size_t i = 0; i < c.size() && clique; ++i) {
      for (std::size_t j = i + 1; j < c.size() && clique; ++j) clique = b.has_edge(c[i], c[j]);
    }
    if (!clique) continue;
    const bool moved = std::any_of(autos.begin(), autos.end(), [&](const Permutation& g) {
      return std::all_of(c.begin(), c.end(), [&](Vertex v) { return in_a[g[v]]; });
    });
    if (!moved) return false;
  }
  return true;
}

namespace {

// Folded label matrix over the delta-edges of a closed member (representative
// = smaller endpoint) extended by k new delta-edges. Domains restrict labels
// per (new, other) slot; assignments violating the switching table are
// pruned. visit returns true to stop.
class NewPairSearch {
 public:
  using Domain = std::function<detail::LabelMask(int fresh, int other)>;
  using Visit = std::function<bool(const std::vector<int>&)>;

  NewPairSearch(const Graph& closed, const DeltaMatching& matching, int k, const detail::TriangleTable& table,
                Domain domain)
      : m_(matching.size()), w_(m_ + k), table_(table), domain_(std::move(domain)),
        labels_(static_cast<std::size_t>(w_) * w_, 0) {
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < m_; ++j) {
        if (i != j) at(i, j) = closed.dist(matching.edges[i].first, matching.edges[j].first);
      }
    }
  }

  bool run(const Visit& visit) { return descend(m_, 0, visit); }

 private:
  int& at(int i, int j) { return labels_[static_cast<std::size_t>(i) * w_ + j]; }

  bool descend(int row, int col, const Visit& visit) {
    if (row == w_) return visit(labels_);
    if (col == row) return descend(row + 1, 0, visit);
    const detail::LabelMask mask = domain_(row - m_, col);
    for (int a = 1; a <= table_.max_label(); ++a) {
      if (!(mask & detail::label_bit(a))) continue;
      bool ok = true;
      for (int c = 0; c < col && ok; ++c) ok = table_.allowed(a, at(row, c), at(col, c));
      if (!ok) continue;
      at(row, col) = at(col, row) = a;
      if (descend(row, col + 1, visit)) return true;
    }
    at(row, col) = at(col, row) = 0;
    return false;
  }

  int m_, w_;
  const detail::TriangleTable& table_;
  Domain domain_;
  std::vector<int> labels_;
};

// Adds k delta-edges (p_t, p_t*) to `closed` with folded labels from the
// matrix produced by NewPairSearch.
Graph append_pairs(const Graph& closed, const DeltaMatching& matching, int k, const std::vector<int>& labels,
                   std::vector<std::pair<Vertex, Vertex>>* added_out = nullptr) {
  const int m = matching.size();
  const int w = m + k;
  const int delta = closed.delta();
  auto folded = [&](int i, int j) { return labels[static_cast<std::size_t>(i) * w + j]; };
  GraphBuilder b(closed);
  std::vector<std::pair<Vertex, Vertex>> added;
  int counter = 0;
  for (int t = 0; t < k; ++t) {
    std::string name;
    do {
      name = "p" + std::to_string(++counter);
    } while (b.view().find(name) || b.view().find(name + "*"));
    const Vertex p = b.add_vertex(name);
    const Vertex q = b.add_vertex(name + "*");
    added.emplace_back(p, q);
  }
  for (int t = 0; t < k; ++t) {
    const auto [p, q] = added[t];
    b.set(p, q, delta);
    for (int j = 0; j < m + t; ++j) {
      const int l = folded(m + t, j);
      const auto [x, y] = j < m ? matching.edges[j] : added[j - m];
      b.set(p, x, l);
      b.set(q, y, l);
      b.set(p, y, delta - l);
      b.set(q, x, delta - l);
    }
  }
  if (added_out) *added_out = added;
  return std::move(b).build();
}

// Labels of the new rows in slot order under a relabelling of the new
// delta-edges.
std::vector<int> new_rows(const std::vector<int>& labels, int m, int k, const std::vector<int>& order) {
  const int w = m + k;
  std::vector<int> out;
  auto idx = [&](int i) { return i < m ? i : m + order[i - m]; };
  for (int t = 0; t < k; ++t) {
    for (int j = 0; j < m + t; ++j) {
      out.push_back(labels[static_cast<std::size_t>(idx(m + t)) * w + idx(j)]);
    }
  }
  return out;
}

bool is_least_relabelling(const std::vector<int>& labels, int m, int k) {
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  const auto mine = new_rows(labels, m, k, order);
  while (std::next_permutation(order.begin(), order.end())) {
    if (new_rows(labels, m, k, order) < mine) return false;
  }
  return true;
}

void check_search_bound(int max_vertices) {
  if (max_vertices > kMaxSearchVertices) {
    throw SizeLimitError("witness search refused for bound " + std::to_string(max_vertices), kMaxSearchVertices);
  }
}

}  // namespace

std::optional<Graph> search_witness(const Graph& a, const ClassDescriptor& desc, int max_vertices) {
  check_search_bound(max_vertices);
  if (a.empty()) return a;
  const auto closure = antipodal_closure(a, desc);
  const Graph& closed = closure.graph;
  const auto table = detail::switching_table(desc);
  const detail::LabelMask all = detail::labels_between(1, desc.delta - 1);
  for (int k = 0; closed.size() + 2 * k <= max_vertices; ++k) {
    std::optional<Graph> found;
    NewPairSearch search(closed, closure.matching, k, table, [&](int, int) { return all; });
    search.run([&](const std::vector<int>& labels) {
      if (!is_least_relabelling(labels, closure.matching.size(), k)) return false;
      Graph b = append_pairs(closed, closure.matching, k, labels);
      if (!is_member(b, desc)) return false;
      if (!verify_eppa_witness(a, b).ok) return false;
      found = std::move(b);
      return true;
    });
    if (found) return found;
  }
  return std::nullopt;
}

std::optional<GammaStructure> search_gamma_witness(const GammaStructure& a_plus, const ClassDescriptor& desc,
                                                   int max_vertices, const OrientationSet* orientation) {
  check_search_bound(max_vertices);
  const Graph& a = a_plus.base();
  const auto matching = delta_matching(a);
  if (!matching.perfect()) throw InputError("expanded source needs a perfect matching of delta-edges");
  const OrientationSet o = orientation ? *orientation : OrientationSet::standard(desc.delta);
  const MarkLanguage& language = a_plus.language();
  const int m = language.index_count;
  const int delta = desc.delta;
  const auto table = detail::switching_table(desc);

  // Candidate marks for the representative of a new pair: first bit 0.
  std::vector<Mark> marks;
  for (int i = 0; i < m; ++i) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (m - 1)); ++bits) {
      Valuation chi(m);
      for (int j = 1; j < m; ++j) chi.set(j, (bits >> (j - 1)) & 1U);
      marks.push_back(Mark{i, std::move(chi)});
    }
  }
  std::sort(marks.begin(), marks.end());

  for (int k = 0; a.size() + 2 * k <= max_vertices; ++k) {
    std::optional<GammaStructure> found;
    std::vector<int> choice(k, 0);
    std::function<void(int)> pick = [&](int t) {
      if (found) return;
      if (t < k) {
        for (int c = t == 0 ? 0 : choice[t - 1]; c < static_cast<int>(marks.size()) && !found; ++c) {
          choice[t] = c;
          pick(t + 1);
        }
        return;
      }
      auto mark_of_rep = [&](int folded) -> Mark {
        if (folded < matching.size()) return *a_plus.mark(matching.edges[folded].first);
        return marks[choice[folded - matching.size()]];
      };
      auto domain = [&](int fresh, int other) {
        const Mark p = marks[choice[fresh]];
        const Mark x = mark_of_rep(other);
        const int f = p.chi[x.index] == x.chi[p.index] ? 0 : 1;
        detail::LabelMask mask = 0;
        for (int l = 1; l < delta; ++l) {
          if (!parity_clause_holds(f, l, o) || !parity_clause_holds(1 - f, delta - l, o)) continue;
          if (language.bipartite()) {
            const bool same = language.first_part[p.index] == language.first_part[x.index];
            if ((l % 2 == 0) != same) continue;
          }
          mask |= detail::label_bit(l);
        }
        return mask;
      };
      NewPairSearch search(a, matching, k, table, domain);
      search.run([&](const std::vector<int>& labels) {
        std::vector<std::pair<Vertex, Vertex>> added;
        Graph b = append_pairs(a, matching, k, labels, &added);
        if (!is_member(b, desc)) return false;
        GammaStructure b_plus(b, language);
        for (Vertex v = 0; v < a.size(); ++v) {
          if (a_plus.mark(v)) b_plus.set_mark(v, *a_plus.mark(v));
          if (a_plus.mate(v) != PartialMap::kUnmapped) b_plus.set_mates(v, a_plus.mate(v));
        }
        for (int t = 0; t < k; ++t) {
          const Mark& mk = marks[choice[t]];
          b_plus.set_mates(added[t].first, added[t].second);
          b_plus.set_mark(added[t].first, mk);
          b_plus.set_mark(added[t].second, Mark{mk.index, mk.chi.complement()});
        }
        if (!is_suitable_expansion(b_plus, b, desc, &o)) return false;
        if (!verify_eppa_witness(a_plus, b_plus).ok) return false;
        found = std::move(b_plus);
        return true;
      });
    };
    pick(0);
    if (found) return found;
  }
  return std::nullopt;
}

PipelineResult pipeline(const Graph& a, const ClassDescriptor& desc, const PipelineSource& source,
                        const OrientationSet* orientation) {
  PipelineResult r;
  auto fail = [&](PipelineResult::Failure kind, std::string why) {
    r.ok = false;
    r.failure = kind;
    r.diagnostic = std::move(why);
    return r;
  };
  if (a.empty()) {
    r.ok = true;
    r.stage = "done";
    r.closed = a;
    r.reduct = a;
    return r;
  }
  try {
    r.stage = "closure";
    r.closed = antipodal_closure(a, desc).graph;
    if (desc.variant == Variant::EvenBipartite) {
      r.stage = "padding";
      r.closed = pad_bipartition(r.closed, desc);
    }
    r.stage = "expansion";
    r.expanded = build_suitable_expansion(r.closed, desc, orientation);
    r.stage = "witness";
    if (source.supplied) {
      r.witness = source.supplied;
    } else {
      r.witness = search_gamma_witness(*r.expanded, desc, source.search_bound, orientation);
      if (!r.witness) {
        return fail(PipelineResult::Failure::NoWitness,
                    "no witness within " + std::to_string(source.search_bound) + " vertices");
      }
    }
    r.stage = "gamma-verify";
    r.gamma_report = verify_eppa_witness(*r.expanded, *r.witness);
    if (!r.gamma_report.ok) {
      const auto& cx = *r.gamma_report.counterexample;
      std::string text = "expanded witness fails for map";
      for (Vertex v : cx.map.domain()) {
        text += " " + r.expanded->base().name(v) + "->" + r.expanded->base().name(cx.map(v));
      }
      if (cx.lang) text += " with " + describe(*cx.lang);
      return fail(PipelineResult::Failure::VerifiedFalse, text);
    }
    r.stage = "reduct";
    r.reduct = r.witness->reduct();
    const auto membership = check_membership(r.reduct, desc);
    if (!membership.member) return fail(PipelineResult::Failure::VerifiedFalse, membership.diagnostic);
    r.stage = "plain-verify";
    r.plain_report = verify_eppa_witness(a, r.reduct);
    if (!r.plain_report.ok) return fail(PipelineResult::Failure::VerifiedFalse, "reduct fails as a plain witness");
    r.stage = "done";
    r.ok = true;
    return r;
  } catch (const SizeLimitError& e) {
    return fail(PipelineResult::Failure::Input, e.what());
  } catch (const InputError& e) {
    return fail(PipelineResult::Failure::Input, e.what());
  } catch (const NoCompletionError& e) {
    return fail(PipelineResult::Failure::NoWitness, e.what());
  }
}

}  // namespace antipodal
