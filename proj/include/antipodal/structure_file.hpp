#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "antipodal/cherlin.hpp"
#include "antipodal/completion.hpp"
#include "antipodal/gamma.hpp"
#include "antipodal/graph.hpp"

namespace antipodal {

// Parsed contents of a line-oriented structure file (grammar in
// docs/file-format.md).
struct StructureDocument {
  std::optional<int> K;
  std::optional<Variant> variant;
  Graph graph;
  std::vector<Vertex> mates;                // kUnmapped when absent
  std::vector<std::optional<Mark>> marks;   // index 0-based in memory
  std::optional<ParityFunction> f;

  bool has_mates() const;
  bool has_marks() const;
  // Length of the valuations (0 without marks).
  int index_count() const;

  // Class from the header, when K is present.
  std::optional<ClassDescriptor> descriptor() const;

  // Mates and marks as a structure. The index partition of an even-bipartite
  // class is derived from the marks.
  GammaStructure gamma() const;
  // Same, with the language given (e.g. taken from a superstructure).
  GammaStructure gamma(const MarkLanguage& language) const;

  static StructureDocument from_graph(Graph g);
  static StructureDocument from_gamma(const GammaStructure& s);
};

// Throws InputError with the offending line number. `fallback_delta` is
// used when the file has no delta line.
StructureDocument read_structure(std::istream& in, std::optional<int> fallback_delta = std::nullopt);
StructureDocument read_structure(const std::string& text, std::optional<int> fallback_delta = std::nullopt);

// Canonical form: header, vertices, edges (u < v by id), mates, marks, f.
std::string write_structure(const StructureDocument& doc);

}  // namespace antipodal
