#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "antipodal/cherlin.hpp"
#include "antipodal/cli.hpp"
#include "antipodal/error.hpp"
#include "antipodal/structure_file.hpp"

namespace {

using namespace antipodal;
namespace fs = std::filesystem;

const fs::path kFixtures{ANTIPODAL_FIXTURES};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const char* name) { return (kFixtures / name).string(); }

// Value of `key` in a tab-separated report.
std::string field(const std::string& report, const std::string& key) {
  std::istringstream in(report);
  std::string line;
  while (std::getline(in, line)) {
    if (line == "---") break;
    if (line.rfind(key + "\t", 0) == 0) return line.substr(key.size() + 1);
  }
  return {};
}

std::string structure_part(const std::string& report) {
  const auto at = report.find("---\n");
  return at == std::string::npos ? std::string{} : report.substr(at + 4);
}

TEST(FileFormat, FixturesRoundTripByteForByte) {
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(kFixtures)) {
    if (entry.path().extension() != ".elg") continue;
    const std::string text = slurp(entry.path());
    EXPECT_EQ(write_structure(read_structure(text)), text) << entry.path();
    ++seen;
  }
  EXPECT_GE(seen, 6);
}

TEST(FileFormat, ReadsEveryLineKind) {
  const auto doc = read_structure(slurp(fixture("quadruple-expanded.elg")));
  EXPECT_EQ(doc.graph.size(), 4);
  EXPECT_TRUE(doc.has_mates());
  EXPECT_TRUE(doc.has_marks());
  EXPECT_EQ(doc.index_count(), 2);
  EXPECT_EQ(doc.marks[1], (Mark{0, Valuation::parse("11")}));
  EXPECT_EQ(doc.descriptor(), ClassDescriptor::make(3, 1));
  const auto withf = read_structure(slurp(fixture("two-edges.elg")));
  ASSERT_TRUE(withf.f);
  EXPECT_EQ((*withf.f)(0, 2), 1);
  EXPECT_EQ((*withf.f)(0, 3), 0);
}

TEST(FileFormat, CommentsAndFallbackDelta) {
  const auto doc = read_structure("# header follows\nelg 1\nvertex a  # trailing\nvertex b\nedge a b 2\n", 4);
  EXPECT_EQ(doc.graph.delta(), 4);
  EXPECT_EQ(doc.graph.dist(0, 1), 2);
}

TEST(FileFormat, ErrorsNameTheLine) {
  auto message = [](const std::string& text) {
    try {
      read_structure(text, 3);
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("elg 2\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("vertex a\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("elg 1\nvertex a\nvertex b\nedge a b 1\nedge b a 2\n").find("line 5"), std::string::npos);
  EXPECT_NE(message("elg 1\nvertex a\nvertex b\nedge a b 0\n").find("line 4"), std::string::npos);
  EXPECT_NE(message("elg 1\nvertex a\nedge a c 1\n").find("line 3"), std::string::npos);
  EXPECT_NE(message("elg 1\nvertex a\nvertex b\nmark a 1 01\nmark b 1 0\n").find("line 5"), std::string::npos);
  EXPECT_NE(message("elg 1\nvertex a\nvertex b\nmark a 0 01\n").find("line 4"), std::string::npos);
  EXPECT_NE(message("elg 1\nvertex a\nvertex b\nf a b 2\n").find("line 4"), std::string::npos);
  EXPECT_NE(message("elg 1\nvertex a\nvertex b\nbogus\n").find("line 4"), std::string::npos);
  EXPECT_NE(message("elg 1\nK 1\nvertex a\nK 2\n").find("line 4"), std::string::npos);
  EXPECT_NE(message("elg 1\ndelta 3\ndelta 3\n").find("line 3"), std::string::npos);
}

TEST(Cli, ValidateExitCodes) {
  const auto ok = run({"validate", "--delta", "3", "--K", "1", fixture("quadruple.elg")});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_EQ(field(ok.out, "command"), "validate");
  EXPECT_EQ(field(ok.out, "outcome"), "member");
  EXPECT_EQ(field(ok.out, "input_digest").size(), 16u);

  const auto bad = run({"validate", "--delta", "3", "--K", "1", fixture("bad-triangle.elg")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("(1,1,3)"), std::string::npos);

  const auto conflict = run({"validate", "--K", "2", fixture("quadruple.elg")});
  EXPECT_EQ(conflict.code, 2);

  const auto missing = run({"validate", fixture("no-such-file.elg")});
  EXPECT_EQ(missing.code, 2);
}

TEST(Cli, CompleteReportsNonMetricCycle) {
  const auto r = run({"complete", "--mode", "shortest-path", fixture("nonmetric.elg")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(field(r.out, "cycle").find("(1,1,5)"), std::string::npos);
  EXPECT_TRUE(structure_part(r.out).empty());
}

TEST(Cli, AntipodalCompletionOfTwoEdges) {
  const auto r = run({"complete", "--mode", "antipodal", fixture("two-edges.elg")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = read_structure(structure_part(r.out));
  EXPECT_EQ(doc.graph.dist(*doc.graph.find("u1"), *doc.graph.find("u2")), 1);
  EXPECT_EQ(doc.graph.dist(*doc.graph.find("u1"), *doc.graph.find("v2")), 2);
  // Antipodal mode needs f lines.
  EXPECT_EQ(run({"complete", "--mode", "antipodal", fixture("quadruple.elg")}).code, 2);
}

TEST(Cli, UsageErrors) {
  const auto unknown = run({"validate", "--frobnicate", fixture("quadruple.elg")});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("validate"), std::string::npos);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"dance"}).code, 2);
  EXPECT_EQ(run({"complete", "--mode", "sideways", fixture("quadruple.elg")}).code, 2);
}

TEST(Cli, FoldUnfoldClose) {
  const auto folded = run({"fold", fixture("quadruple.elg")});
  ASSERT_EQ(folded.code, 0) << folded.err;
  const auto fdoc = read_structure(structure_part(folded.out));
  EXPECT_EQ(fdoc.graph.size(), 2);
  EXPECT_EQ(fdoc.graph.delta(), 2);

  const fs::path dir = fs::temp_directory_path() / "antipodal_cli_test";
  fs::create_directories(dir);
  const auto path = (dir / "folded.elg").string();
  EXPECT_EQ(run({"fold", "--out", path, fixture("quadruple.elg")}).code, 0);
  EXPECT_EQ(slurp(path), structure_part(folded.out));
  const auto unfolded = run({"unfold", "--delta", "3", "--K", "1", path});
  ASSERT_EQ(unfolded.code, 0) << unfolded.err;
  const auto udoc = read_structure(structure_part(unfolded.out));
  EXPECT_EQ(udoc.graph.size(), 4);
  EXPECT_TRUE(is_member(udoc.graph, ClassDescriptor::make(3, 1)));

  std::ofstream(dir / "lone.elg") << "elg 1\ndelta 3\nK 1\nvertex a\n";
  const auto closed = run({"close", (dir / "lone.elg").string()});
  ASSERT_EQ(closed.code, 0) << closed.err;
  const auto cdoc = read_structure(structure_part(closed.out));
  EXPECT_EQ(cdoc.graph.size(), 2);
  EXPECT_TRUE(cdoc.has_mates());
}

TEST(Cli, ExpandAndExtend) {
  const auto e = run({"expand", fixture("quadruple.elg")});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(structure_part(e.out), slurp(fixture("quadruple-expanded.elg")));
  const auto x = run({"extend", "--map", "x1:x2", fixture("quadruple-expanded.elg")});
  ASSERT_EQ(x.code, 0) << x.err;
  EXPECT_NE(x.out.find("psi"), std::string::npos);
  const auto bad = run({"extend", "--map", "x1:y1,x2:x2", fixture("quadruple-expanded.elg")});
  EXPECT_EQ(bad.code, 2);
}

TEST(Cli, WitnessCommands) {
  const fs::path dir = fs::temp_directory_path() / "antipodal_cli_test";
  fs::create_directories(dir);
  std::ofstream(dir / "edge.elg") << "elg 1\ndelta 3\nK 1\nvertex x1\nvertex y1\nedge x1 y1 3\n";
  const auto edge = (dir / "edge.elg").string();
  const auto v = run({"verify-witness", edge, fixture("quadruple.elg")});
  EXPECT_EQ(v.code, 0) << v.err;
  EXPECT_EQ(field(v.out, "outcome"), "witness");
  EXPECT_EQ(field(v.out, "partial_automorphisms_checked"), "7");

  const auto s = run({"search-witness", "--bound", "4", edge});
  EXPECT_EQ(s.code, 0) << s.err;
  const auto g = run({"search-witness", "--mode", "gamma", "--bound", "8", edge});
  EXPECT_EQ(g.code, 0) << g.err;
  EXPECT_EQ(field(g.out, "stage"), "done");

  std::ofstream(dir / "lone.elg") << "elg 1\ndelta 3\nK 1\nvertex a\n";
  EXPECT_EQ(run({"search-witness", "--bound", "1", (dir / "lone.elg").string()}).code, 3);
}

TEST(Cli, SeededRunsAreByteIdentical) {
  for (const char* seed : {"1", "7", "12345"}) {
    const auto a = run({"gen", "--delta", "5", "--K", "2", "--seed", seed, "--pairs", "3"});
    const auto b = run({"gen", "--delta", "5", "--K", "2", "--seed", seed, "--pairs", "3"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto doc = read_structure(structure_part(a.out));
    EXPECT_EQ(doc.graph.size(), 6);
    EXPECT_TRUE(is_member(doc.graph, ClassDescriptor::make(5, 2)));
  }
  EXPECT_NE(run({"gen", "--delta", "5", "--K", "2", "--seed", "1"}).out,
            run({"gen", "--delta", "5", "--K", "2", "--seed", "2"}).out);
  const auto a = run({"validate", fixture("cycle8.elg")});
  EXPECT_EQ(a.out, run({"validate", fixture("cycle8.elg")}).out);
}

TEST(Cli, DigestDependsOnInput) {
  EXPECT_NE(cli::fnv1a("a"), cli::fnv1a("b"));
  EXPECT_EQ(cli::fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_NE(field(run({"validate", fixture("quadruple.elg")}).out, "input_digest"),
            field(run({"validate", fixture("cycle8.elg")}).out, "input_digest"));
}

}  // namespace
