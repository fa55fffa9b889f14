#include "antipodal/structure_file.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <sstream>

#include "antipodal/error.hpp"

namespace antipodal {

bool StructureDocument::has_mates() const {
  return std::any_of(mates.begin(), mates.end(), [](Vertex v) { return v != PartialMap::kUnmapped; });
}

bool StructureDocument::has_marks() const {
  return std::any_of(marks.begin(), marks.end(), [](const auto& m) { return m.has_value(); });
}

int StructureDocument::index_count() const {
  for (const auto& m : marks) {
    if (m) return static_cast<int>(m->chi.size());
  }
  return 0;
}

std::optional<ClassDescriptor> StructureDocument::descriptor() const {
  if (!K) return std::nullopt;
  return variant ? ClassDescriptor::make(graph.delta(), *K, *variant) : ClassDescriptor::make(graph.delta(), *K);
}

GammaStructure StructureDocument::gamma(const MarkLanguage& language) const {
  GammaStructure out(graph, language);
  for (Vertex v = 0; v < graph.size(); ++v) {
    if (marks[v]) out.set_mark(v, *marks[v]);
    if (mates[v] != PartialMap::kUnmapped && mates[v] > v) out.set_mates(v, mates[v]);
  }
  return out;
}

GammaStructure StructureDocument::gamma() const {
  const int m = index_count();
  GammaStructure plain = gamma(MarkLanguage{m, {}});
  const bool bipartite = variant ? *variant == Variant::EvenBipartite : (K && *K == graph.delta() && graph.delta() % 2 == 0);
  if (!bipartite || m == 0) return plain;
  auto first = derive_index_partition(plain);
  if (first.empty()) return plain;
  return gamma(MarkLanguage{m, std::move(first)});
}

StructureDocument StructureDocument::from_graph(Graph g) {
  StructureDocument doc;
  doc.mates.assign(g.size(), PartialMap::kUnmapped);
  doc.marks.assign(g.size(), std::nullopt);
  doc.graph = std::move(g);
  return doc;
}

StructureDocument StructureDocument::from_gamma(const GammaStructure& s) {
  StructureDocument doc = from_graph(s.base());
  doc.mates = s.mates();
  for (Vertex v = 0; v < s.size(); ++v) doc.marks[v] = s.mark(v);
  return doc;
}

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

[[noreturn]] void fail(int line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

int parse_int(const Line& line, const std::string& token) {
  int value = 0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size()) fail(line.number, "expected an integer, got '" + token + "'");
  return value;
}

void expect_arity(const Line& line, std::size_t n) {
  if (line.tokens.size() != n) {
    fail(line.number, "'" + line.tokens[0] + "' takes " + std::to_string(n - 1) + " argument(s)");
  }
}

}  // namespace

StructureDocument read_structure(std::istream& in, std::optional<int> fallback_delta) {
  std::vector<Line> lines;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    Line line{number, {}};
    for (std::string w; words >> w;) line.tokens.push_back(w);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  if (lines.empty() || lines[0].tokens[0] != "elg") throw InputError("line 1: expected header 'elg 1'");
  expect_arity(lines[0], 2);
  if (lines[0].tokens[1] != "1") fail(lines[0].number, "unsupported format version " + lines[0].tokens[1]);

  StructureDocument doc;
  std::optional<int> delta;
  for (const Line& line : lines) {
    const auto& kw = line.tokens[0];
    if (kw == "delta") {
      expect_arity(line, 2);
      if (delta) fail(line.number, "duplicate delta");
      delta = parse_int(line, line.tokens[1]);
    } else if (kw == "K") {
      expect_arity(line, 2);
      if (doc.K) fail(line.number, "duplicate K");
      doc.K = parse_int(line, line.tokens[1]);
    } else if (kw == "variant") {
      expect_arity(line, 2);
      if (doc.variant) fail(line.number, "duplicate variant");
      try {
        doc.variant = parse_variant(line.tokens[1]);
      } catch (const InputError& e) {
        fail(line.number, e.what());
      }
    }
  }
  if (!delta) delta = fallback_delta;
  if (!delta) throw InputError("missing 'delta' line");

  GraphBuilder b(*delta);
  auto vertex = [&](const Line& line, const std::string& name) {
    auto v = b.view().find(name);
    if (!v) fail(line.number, "unknown vertex '" + name + "'");
    return *v;
  };
  std::vector<std::pair<Line, std::pair<Vertex, Vertex>>> mate_lines;
  std::vector<std::pair<Line, std::pair<Vertex, Mark>>> mark_lines;
  std::vector<std::tuple<Vertex, Vertex, int, int>> f_lines;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    const auto& kw = line.tokens[0];
    try {
      if (kw == "delta" || kw == "K" || kw == "variant") {
        continue;
      } else if (kw == "elg") {
        fail(line.number, "header repeated");
      } else if (kw == "vertex") {
        expect_arity(line, 2);
        b.add_vertex(line.tokens[1]);
      } else if (kw == "edge") {
        expect_arity(line, 4);
        const Vertex u = vertex(line, line.tokens[1]), v = vertex(line, line.tokens[2]);
        if (b.view().has_edge(u, v)) fail(line.number, "duplicate edge " + describe_pair(b.view(), u, v));
        const int label = parse_int(line, line.tokens[3]);
        if (label < 1) fail(line.number, "edge labels start at 1");
        b.set(u, v, label);
      } else if (kw == "mate") {
        expect_arity(line, 3);
        mate_lines.push_back({line, {vertex(line, line.tokens[1]), vertex(line, line.tokens[2])}});
      } else if (kw == "mark") {
        expect_arity(line, 4);
        const int index = parse_int(line, line.tokens[2]);
        if (index < 1) fail(line.number, "mark indices start at 1");
        mark_lines.push_back(
            {line, {vertex(line, line.tokens[1]), Mark{index - 1, Valuation::parse(line.tokens[3])}}});
      } else if (kw == "f") {
        expect_arity(line, 4);
        const int bit = parse_int(line, line.tokens[3]);
        f_lines.emplace_back(vertex(line, line.tokens[1]), vertex(line, line.tokens[2]), bit, line.number);
      } else {
        fail(line.number, "unknown keyword '" + kw + "'");
      }
    } catch (const InputError& e) {
      const std::string what = e.what();
      if (what.rfind("line ", 0) == 0) throw;
      fail(line.number, what);
    }
  }
  const int n = b.size();
  doc.graph = std::move(b).build();
  doc.mates.assign(n, PartialMap::kUnmapped);
  doc.marks.assign(n, std::nullopt);
  for (const auto& [line, pair] : mate_lines) {
    const auto [u, v] = pair;
    if (u == v) fail(line.number, "a vertex cannot be its own mate");
    if (doc.mates[u] != PartialMap::kUnmapped || doc.mates[v] != PartialMap::kUnmapped) {
      fail(line.number, "vertex already has a mate");
    }
    doc.mates[u] = v;
    doc.mates[v] = u;
  }
  std::optional<std::size_t> width;
  for (const auto& [line, entry] : mark_lines) {
    const auto& [v, mark] = entry;
    if (doc.marks[v]) fail(line.number, "vertex " + doc.graph.name(v) + " already carries a mark");
    if (width && *width != mark.chi.size()) fail(line.number, "valuations must share one length");
    width = mark.chi.size();
    if (mark.index >= static_cast<int>(mark.chi.size())) fail(line.number, "mark index exceeds the valuation length");
    doc.marks[v] = mark;
  }
  if (!f_lines.empty()) {
    ParityFunction f(n);
    std::vector<bool> seen(static_cast<std::size_t>(n) * n, false);
    for (const auto& [u, v, bit, line] : f_lines) {
      if (u == v) fail(line, "f is defined on pairs of distinct vertices");
      if (bit != 0 && bit != 1) fail(line, "f takes values 0 or 1");
      if (seen[static_cast<std::size_t>(u) * n + v]) fail(line, "duplicate f line");
      seen[static_cast<std::size_t>(u) * n + v] = seen[static_cast<std::size_t>(v) * n + u] = true;
      f.set(u, v, bit);
    }
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        if (!seen[static_cast<std::size_t>(u) * n + v]) {
          throw InputError("f must be given on every pair; missing " + describe_pair(doc.graph, u, v));
        }
      }
    }
    doc.f = std::move(f);
  }
  return doc;
}

StructureDocument read_structure(const std::string& text, std::optional<int> fallback_delta) {
  std::istringstream in(text);
  return read_structure(in, fallback_delta);
}

std::string write_structure(const StructureDocument& doc) {
  const Graph& g = doc.graph;
  std::ostringstream out;
  out << "elg 1\n";
  out << "delta " << g.delta() << "\n";
  if (doc.K) out << "K " << *doc.K << "\n";
  if (doc.variant) out << "variant " << to_string(*doc.variant) << "\n";
  for (Vertex v = 0; v < g.size(); ++v) out << "vertex " << g.name(v) << "\n";
  for (auto [u, v] : g.edges()) out << "edge " << g.name(u) << " " << g.name(v) << " " << g.dist(u, v) << "\n";
  for (Vertex v = 0; v < g.size(); ++v) {
    if (doc.mates[v] != PartialMap::kUnmapped && doc.mates[v] > v) {
      out << "mate " << g.name(v) << " " << g.name(doc.mates[v]) << "\n";
    }
  }
  for (Vertex v = 0; v < g.size(); ++v) {
    if (doc.marks[v]) {
      out << "mark " << g.name(v) << " " << doc.marks[v]->index + 1 << " " << doc.marks[v]->chi.to_string() << "\n";
    }
  }
  if (doc.f) {
    for (Vertex u = 0; u < g.size(); ++u) {
      for (Vertex v = u + 1; v < g.size(); ++v) out << "f " << g.name(u) << " " << g.name(v) << " " << (*doc.f)(u, v) << "\n";
    }
  }
  return out.str();
}

}  // namespace antipodal
