#include <gtest/gtest.h>

#include <random>

#include "antipodal/automorphisms.hpp"
#include "antipodal/cherlin.hpp"
#include "antipodal/completion.hpp"
#include "antipodal/error.hpp"
#include "antipodal/gamma.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

namespace {

using namespace antipodal;

ClassDescriptor cls(int delta, int K) { return ClassDescriptor::make(delta, K); }

Valuation bits(const char* s) { return Valuation::parse(s); }

Graph edge3() {
  GraphBuilder b(3);
  b.add_vertex("u");
  b.add_vertex("v");
  b.set("u", "v", 3);
  return b.build();
}

Graph quadruple() {
  GraphBuilder b(3);
  for (const char* n : {"u", "v", "w", "x"}) b.add_vertex(n);
  b.set("u", "v", 3).set("w", "x", 3).set("u", "w", 1).set("v", "x", 1).set("u", "x", 2).set("v", "w", 2);
  return b.build();
}

// The 8-cycle with its path metric, antipodal of diameter 4.
Graph cycle8() {
  GraphBuilder b(4);
  b.add_vertices(8, "c");
  for (Vertex u = 0; u < 8; ++u)
    for (Vertex v = u + 1; v < 8; ++v) b.set(u, v, std::min(v - u, 8 - (v - u)));
  return b.build();
}

FlipSet flips(int m, std::initializer_list<std::pair<int, int>> pairs) {
  FlipSet F(m);
  for (auto [i, j] : pairs) F.insert(i, j);
  return F;
}

TEST(Valuation, ParseAndRender) {
  const Valuation v = bits("0110");
  EXPECT_EQ(v.size(), 4u);
  EXPECT_FALSE(v[0]);
  EXPECT_TRUE(v[1]);
  EXPECT_EQ(v.to_string(), "0110");
  EXPECT_EQ(v.complement().to_string(), "1001");
  EXPECT_THROW(Valuation::parse("01a"), InputError);
}

TEST(Valuation, BeyondSixtyFourBits) {
  const std::size_t m = 130;
  Valuation v(m);
  for (std::size_t i = 0; i < m; i += 3) v.set(i, true);
  EXPECT_TRUE(v[129]);
  EXPECT_FALSE(v[128]);
  EXPECT_EQ(Valuation::parse(v.to_string()), v);
  Valuation w = v;
  w ^= v.complement();
  for (std::size_t i = 0; i < m; ++i) ASSERT_TRUE(w[i]);
  IndexPermutation rev(m);
  for (std::size_t i = 0; i < m; ++i) rev[i] = static_cast<int>(m - 1 - i);
  const Valuation r = flip_permute(v, Valuation(m), rev);
  for (std::size_t i = 0; i < m; ++i) ASSERT_EQ(r[m - 1 - i], v[i]);
  EXPECT_LT(Valuation(m), v);
}

TEST(FlipPermute, Examples) {
  const IndexPermutation id{0, 1}, swap{1, 0};
  EXPECT_EQ(flip_permute(bits("01"), bits("00"), id), bits("01"));
  EXPECT_EQ(flip_permute(bits("01"), bits("11"), id), bits("10"));
  // Flip position 1 first, giving (1,1), then re-index.
  EXPECT_EQ(flip_permute(bits("01"), bits("10"), swap), bits("11"));
  EXPECT_EQ(flip_permute(bits("01"), bits("00"), swap), bits("10"));
}

TEST(LanguagePermutation, ActionExamples) {
  const auto g = LanguagePermutation({0, 1}, flips(2, {{0, 0}, {0, 1}}));
  EXPECT_EQ(g.act({0, bits("00")}), (Mark{0, bits("11")}));
  EXPECT_EQ(g.act({1, bits("10")}), (Mark{1, bits("00")}));
  const auto id = LanguagePermutation::identity(2);
  EXPECT_TRUE(id.is_identity());
  for (const auto& mk : oracle::all_marks(2)) EXPECT_EQ(act_on_mark(id, mk), mk);
  for (const auto& mk : oracle::all_marks(2)) EXPECT_EQ(g.act(mk), oracle::act(g, mk));
}

TEST(LanguagePermutation, ComposeExamples) {
  const auto F = flips(2, {{0, 1}});
  const auto aF = LanguagePermutation::flip_only(F);
  EXPECT_TRUE(compose(aF, aF).is_identity());

  const IndexPermutation psi{1, 0};
  const auto a_psi = LanguagePermutation::permute_only(psi);
  EXPECT_TRUE(compose(a_psi, LanguagePermutation::permute_only({1, 0})).is_identity());

  const auto gh = compose(aF, a_psi);
  EXPECT_EQ(gh.psi(), psi);
  EXPECT_EQ(gh.flips(), flips(2, {{1, 0}}));
  for (const auto& mk : oracle::all_marks(2)) EXPECT_EQ(gh.act(mk), aF.act(a_psi.act(mk)));

  EXPECT_THROW(compose(aF, LanguagePermutation::identity(3)), InputError);
}

TEST(LanguagePermutation, InvertExamples) {
  EXPECT_TRUE(invert(LanguagePermutation::identity(3)).is_identity());
  const auto aF = LanguagePermutation::flip_only(flips(3, {{0, 2}, {1, 1}}));
  EXPECT_EQ(invert(aF), aF);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto g = oracle::random_language_permutation(3, rng);
    for (const auto& mk : oracle::all_marks(3)) {
      ASSERT_EQ(compose(g, invert(g)).act(mk), mk);
      ASSERT_EQ(compose(invert(g), g).act(mk), mk);
    }
  }
}

// Every normal form over D = {0..m-1}.
std::vector<LanguagePermutation> all_forms(int m) {
  std::vector<LanguagePermutation> out;
  for_each_language_permutation(MarkLanguage{m, {}}, [&](const LanguagePermutation& g) {
    out.push_back(g);
    return true;
  });
  return out;
}

TEST(LanguagePermutation, EnumerationCountsNormalForms) {
  // m! permutations times 2^(m(m+1)/2) symmetric sets.
  EXPECT_EQ(all_forms(1).size(), 2u);
  EXPECT_EQ(all_forms(2).size(), 16u);
  EXPECT_EQ(all_forms(3).size(), 384u);
  // Distinct normal forms act differently.
  const auto two = all_forms(2);
  for (std::size_t a = 0; a < two.size(); ++a)
    for (std::size_t b = a + 1; b < two.size(); ++b) EXPECT_FALSE(oracle::same_action(two[a], two[b], 2));
}

TEST(GroupLaws, ExhaustiveUpToThreeIndices) {
  for (int m = 1; m <= 3; ++m) {
    const auto forms = all_forms(m);
    const auto marks = oracle::all_marks(m);
    const auto id = LanguagePermutation::identity(m);
    // Sampled triples keep |D| = 3 quick; every pair is still covered.
    std::mt19937_64 rng(m);
    for (const auto& g : forms) {
      const auto gi = invert(g);
      for (const auto& mk : marks) {
        ASSERT_EQ(compose(g, gi).act(mk), mk);
        ASSERT_EQ(compose(gi, g).act(mk), mk);
        ASSERT_EQ(compose(g, id).act(mk), oracle::act(g, mk));
        ASSERT_EQ(compose(id, g).act(mk), oracle::act(g, mk));
      }
      for (const auto& h : forms) {
        const auto gh = compose(g, h);
        for (const auto& mk : marks) ASSERT_EQ(oracle::act(gh, mk), oracle::act(g, oracle::act(h, mk)));
        const auto& k = forms[rng() % forms.size()];
        for (const auto& mk : marks) ASSERT_EQ(compose(compose(g, h), k).act(mk), compose(g, compose(h, k)).act(mk));
      }
    }
  }
}

TEST(GroupLaws, RandomAtFourIndices) {
  std::mt19937_64 rng(4);
  const auto marks = oracle::all_marks(4);
  for (int t = 0; t < 1000; ++t) {
    const auto g = oracle::random_language_permutation(4, rng);
    const auto h = oracle::random_language_permutation(4, rng);
    const auto k = oracle::random_language_permutation(4, rng);
    const auto gh = compose(g, h);
    for (const auto& mk : marks) {
      ASSERT_EQ(oracle::act(gh, mk), oracle::act(g, oracle::act(h, mk)));
      ASSERT_EQ(compose(g, invert(g)).act(mk), mk);
      ASSERT_EQ(compose(gh, k).act(mk), compose(g, compose(h, k)).act(mk));
    }
  }
}

// Words of length at most 5 over single-pair flips and transpositions
// (each its own inverse) reduce to normal forms with the word's action.
TEST(NormalForm, WordsReduceToActionEqualForms) {
  for (int m = 1; m <= 3; ++m) {
    std::vector<LanguagePermutation> gens;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) gens.push_back(LanguagePermutation::flip_only(flips(m, {{i, j}})));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        IndexPermutation t(m);
        std::iota(t.begin(), t.end(), 0);
        std::swap(t[i], t[j]);
        gens.push_back(LanguagePermutation::permute_only(t));
      }
    const auto marks = oracle::all_marks(m);
    long long words = 0;
    std::function<void(int, const LanguagePermutation&, const std::vector<Mark>&)> rec =
        [&](int depth, const LanguagePermutation& form, const std::vector<Mark>& images) {
          ++words;
          for (std::size_t k = 0; k < marks.size(); ++k) ASSERT_EQ(form.act(marks[k]), images[k]);
          if (depth == 5) return;
          for (const auto& g : gens) {
            std::vector<Mark> next(images.size());
            for (std::size_t k = 0; k < images.size(); ++k) next[k] = oracle::act(g, images[k]);
            rec(depth + 1, compose(g, form), next);
          }
        };
    rec(0, LanguagePermutation::identity(m), marks);
    std::size_t expected = 0, power = 1;
    for (int len = 0; len <= 5; ++len, power *= gens.size()) expected += power;
    EXPECT_EQ(static_cast<std::size_t>(words), expected);
  }
}

TEST(MarkLanguage, BipartiteAdmitsPartitionPreservingOnly) {
  const MarkLanguage lang{4, {true, true, false, false}};
  EXPECT_TRUE(lang.admits({1, 0, 2, 3}));
  EXPECT_TRUE(lang.admits({2, 3, 0, 1}));
  EXPECT_FALSE(lang.admits({0, 2, 1, 3}));
  EXPECT_TRUE((MarkLanguage{4, {}}.admits({0, 2, 1, 3})));
  int count = 0;
  for_each_language_permutation(lang, [&](const LanguagePermutation& g) {
    EXPECT_TRUE(lang.admits(g.psi()));
    ++count;
    return true;
  });
  EXPECT_EQ(count, 8 * 1024);
}

TEST(Expansion, SingleEdge) {
  const auto s = build_suitable_expansion(edge3(), cls(3, 1));
  EXPECT_EQ(s.mark(0), (Mark{0, bits("0")}));
  EXPECT_EQ(s.mark(1), (Mark{0, bits("1")}));
  EXPECT_EQ(s.mate(0), 1);
  EXPECT_EQ(s.mate(1), 0);
  EXPECT_EQ(f_from_marks(s, 0, 1), 1);
  // The endpoints of the edge carry complementary bits: one of the two
  // relations on each delta-edge.
  EXPECT_NE(s.valuation(0)[0], s.valuation(1)[0]);
  EXPECT_TRUE(is_suitable_expansion(s, edge3(), cls(3, 1)));
}

TEST(Expansion, Quadruple) {
  const Graph q = quadruple();
  const auto s = build_suitable_expansion(q, cls(3, 1));
  EXPECT_EQ(s.mark(0), (Mark{0, bits("00")}));
  EXPECT_EQ(s.mark(1), (Mark{0, bits("11")}));
  EXPECT_EQ(s.mark(2), (Mark{1, bits("10")}));
  EXPECT_EQ(s.mark(3), (Mark{1, bits("01")}));
  EXPECT_EQ(f_from_marks(s, 1, 2), 0);
  EXPECT_EQ(q.dist(1, 2), 2);
  for (Vertex u = 0; u < 4; ++u)
    for (Vertex v = u + 1; v < 4; ++v) {
      EXPECT_EQ(f_from_marks(s, u, v), q.dist(u, v) % 2);
      EXPECT_EQ(f_from_marks(s, u, v), f_from_marks(s, v, u));
    }
  EXPECT_TRUE(is_suitable_expansion(s, q, cls(3, 1)));

  GammaStructure bad = s;
  bad.set_mark(1, Mark{0, bits("00")});
  const auto check = check_suitable_expansion(bad, q, cls(3, 1));
  EXPECT_FALSE(check.ok);
  EXPECT_NE(check.failure.find("condition 5"), std::string::npos);
  // Restoring the antipode rule by also moving u still breaks condition 6.
  GammaStructure moved = bad;
  moved.set_mark(0, Mark{0, bits("11")});
  const auto check6 = check_suitable_expansion(moved, q, cls(3, 1));
  EXPECT_FALSE(check6.ok);
  EXPECT_NE(check6.failure.find("condition 6"), std::string::npos);
}

TEST(Expansion, Preconditions) {
  GraphBuilder lone(3);
  lone.add_vertices(3, "p");
  lone.set(0, 1, 3).set(0, 2, 1).set(1, 2, 2);
  EXPECT_THROW(build_suitable_expansion(lone.view(), cls(3, 1)), InputError);
  GraphBuilder one(4);
  one.add_vertex("a");
  one.add_vertex("b");
  one.set("a", "b", 4);
  try {
    build_suitable_expansion(one.view(), cls(4, 4));
    FAIL() << "one delta-edge against none is unbalanced";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("pad_bipartition"), std::string::npos);
  }
}

TEST(Marks, FFromMarksNeedsMarks) {
  GammaStructure s(edge3(), MarkLanguage{1, {}});
  s.set_mark(0, Mark{0, bits("0")});
  EXPECT_THROW(f_from_marks(s, 0, 1), InputError);
  s.set_mark(1, Mark{0, bits("0")});
  EXPECT_EQ(f_from_marks(s, 0, 1), 0);
}

TEST(Bipartite, SwappedIdentificationIsSuitable) {
  const Graph c = cycle8();
  ASSERT_TRUE(check_membership(c, cls(4, 4)).member);
  const auto s = build_suitable_expansion(c, cls(4, 4));
  EXPECT_TRUE(is_suitable_expansion(s, c, cls(4, 4)));
  MarkLanguage swapped = s.language();
  for (std::size_t i = 0; i < swapped.first_part.size(); ++i) swapped.first_part[i] = !swapped.first_part[i];
  GammaStructure t(c, swapped);
  for (Vertex v = 0; v < c.size(); ++v) {
    t.set_mark(v, *s.mark(v));
    if (s.mate(v) > v) t.set_mates(v, s.mate(v));
  }
  EXPECT_TRUE(is_suitable_expansion(t, c, cls(4, 4)));
  // A partition mixing the parts fails condition 7.
  MarkLanguage mixed = s.language();
  mixed.first_part[0] = !mixed.first_part[0];
  GammaStructure u(c, mixed);
  for (Vertex v = 0; v < c.size(); ++v) {
    u.set_mark(v, *s.mark(v));
    if (s.mate(v) > v) u.set_mates(v, s.mate(v));
  }
  const auto check = check_suitable_expansion(u, c, cls(4, 4));
  EXPECT_FALSE(check.ok);
  EXPECT_NE(check.failure.find("condition 7"), std::string::npos);
  EXPECT_EQ(derive_index_partition(s), s.language().first_part);
}

TEST(Bipartite, Padding) {
  const auto d = cls(4, 4);
  EXPECT_EQ(pad_bipartition(cycle8(), d), cycle8());

  GraphBuilder one(4);
  one.add_vertex("a");
  one.add_vertex("b");
  one.set("a", "b", 4);
  const Graph p1 = pad_bipartition(one.view(), d);
  EXPECT_EQ(p1.size(), 4);
  EXPECT_TRUE(check_membership(p1, d).member);
  auto m1 = delta_matching(p1);
  EXPECT_EQ(std::count(m1.first_part.begin(), m1.first_part.end(), true), 1);
  EXPECT_EQ(p1.dist(0, 1), 4);

  GraphBuilder two(4);
  for (const char* n : {"u", "v", "w", "x"}) two.add_vertex(n);
  two.set("u", "v", 4).set("w", "x", 4).set("u", "w", 2).set("u", "x", 2).set("v", "w", 2).set("v", "x", 2);
  ASSERT_TRUE(check_membership(two.view(), d).member);
  const Graph p2 = pad_bipartition(two.view(), d);
  EXPECT_EQ(p2.size(), 8);
  EXPECT_TRUE(check_membership(p2, d).member);
  auto m2 = delta_matching(p2);
  EXPECT_EQ(std::count(m2.first_part.begin(), m2.first_part.end(), true), 2);
  for (Vertex u = 0; u < 4; ++u)
    for (Vertex v = 0; v < 4; ++v) EXPECT_EQ(p2.dist(u, v), two.view().dist(u, v));
  EXPECT_TRUE(is_suitable_expansion(build_suitable_expansion(p2, d), p2, d));
  EXPECT_THROW(pad_bipartition(quadruple(), cls(3, 1)), InputError);
}

// Expansions of the whole corpus pass the checker, agree with distances on
// parity and keep f_from_marks invariant under every automorphism of the
// expanded structure.
TEST(Expansion, CorpusProperties) {
  int structures = 0, automorphisms_seen = 0;
  for (const auto& [g, desc] : corpus::expansion_corpus(30, 17)) {
    const auto s = build_suitable_expansion(g, desc);
    const auto check = check_suitable_expansion(s, g, desc);
    ASSERT_TRUE(check.ok) << check.failure;
    const auto o = OrientationSet::standard(desc.delta);
    for (Vertex u = 0; u < g.size(); ++u)
      for (Vertex v = u + 1; v < g.size(); ++v) ASSERT_TRUE(parity_clause_holds(f_from_marks(s, u, v), g.dist(u, v), o));
    const auto gauts = oracle::gamma_automorphisms(s, automorphisms(g));
    ASSERT_FALSE(gauts.empty());
    for (const auto& [lang, p] : gauts) {
      ++automorphisms_seen;
      for (Vertex u = 0; u < g.size(); ++u)
        for (Vertex v = u + 1; v < g.size(); ++v) ASSERT_EQ(f_from_marks(s, u, v), f_from_marks(s, p[u], p[v]));
    }
    ++structures;
  }
  EXPECT_GT(structures, 90);
  EXPECT_GT(automorphisms_seen, structures);
}

}  // namespace
