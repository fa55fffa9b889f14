#include "antipodal/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "antipodal/cherlin.hpp"
#include "antipodal/completion.hpp"
#include "antipodal/eppa.hpp"
#include "antipodal/error.hpp"
#include "antipodal/gamma.hpp"
#include "antipodal/structure_file.hpp"

namespace antipodal::cli {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string hex64(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, value >>= 4) s[i] = kDigits[value & 0xf];
  return s;
}

// Keeps each report line a single key<TAB>value pair.
std::string flatten(std::string text) {
  std::replace_if(text.begin(), text.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return text;
}

struct Report {
  std::vector<std::pair<std::string, std::string>> fields;
  std::optional<std::string> structure;

  void add(std::string key, std::string value) { fields.emplace_back(std::move(key), flatten(std::move(value))); }
};

struct Options {
  std::optional<int> delta;
  std::optional<int> K;
  std::optional<std::string> variant;
  std::optional<std::string> orientation;
  std::optional<std::string> out_path;
  bool timing = false;
};

// A result of one subcommand: exit code and outcome word.
struct Outcome {
  int code;
  std::string word;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

class Session {
 public:
  Session(const Options& options, Report& report) : options_(options), report_(report) {}

  StructureDocument load(const std::string& path, bool apply_delta = true) {
    const std::string text = read_file(path);
    digest_ = fnv1a(text, digest_);
    StructureDocument doc = read_structure(text, apply_delta ? options_.delta : std::nullopt);
    if (apply_delta && options_.delta && doc.graph.delta() != *options_.delta) {
      throw InputError("--delta " + std::to_string(*options_.delta) + " conflicts with delta " +
                       std::to_string(doc.graph.delta()) + " in " + path);
    }
    if (options_.K) {
      if (doc.K && *doc.K != *options_.K) throw InputError("--K conflicts with the K line in " + path);
      doc.K = options_.K;
    }
    if (options_.variant) {
      const Variant v = parse_variant(*options_.variant);
      if (doc.variant && *doc.variant != v) throw InputError("--variant conflicts with the variant line in " + path);
      doc.variant = v;
    }
    last_ = doc.graph;
    return doc;
  }

  // Graph of the most recently loaded file.
  const std::optional<Graph>& last() const { return last_; }

  void mix(std::string_view bytes) { digest_ = fnv1a(bytes, digest_); }
  std::uint64_t digest() const { return digest_; }

  ClassDescriptor descriptor(const StructureDocument& doc) const {
    auto desc = doc.descriptor();
    if (!desc) throw InputError("class unknown: give --K or a K line");
    return *desc;
  }

  ClassDescriptor descriptor_from_flags() const {
    if (!options_.delta || !options_.K) throw InputError("--delta and --K are required");
    return options_.variant ? ClassDescriptor::make(*options_.delta, *options_.K, parse_variant(*options_.variant))
                            : ClassDescriptor::make(*options_.delta, *options_.K);
  }

  std::optional<OrientationSet> orientation(int delta) const {
    if (!options_.orientation) return std::nullopt;
    std::vector<int> members;
    std::stringstream list(*options_.orientation);
    for (std::string item; std::getline(list, item, ',');) {
      try {
        std::size_t used = 0;
        members.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::logic_error&) {
        throw InputError("--O expects a comma-separated list of integers, got '" + item + "'");
      }
    }
    return OrientationSet(delta, std::move(members));
  }

  void emit(StructureDocument doc, const std::optional<ClassDescriptor>& desc) {
    if (desc) {
      doc.K = desc->K;
      doc.variant = desc->variant;
    }
    report_.structure = write_structure(doc);
  }

 private:
  const Options& options_;
  Report& report_;
  std::uint64_t digest_ = 0xcbf29ce484222325ULL;
  std::optional<Graph> last_;
};

std::string format_map(const Graph& g, const PartialMap& map) {
  std::string s;
  for (Vertex v : map.domain()) {
    if (!s.empty()) s += ',';
    s += g.name(v) + ":" + g.name(map(v));
  }
  return s.empty() ? "(empty)" : s;
}

PartialMap parse_map(const Graph& g, const std::string& text) {
  PartialMap map(g.size());
  std::stringstream list(text);
  for (std::string item; std::getline(list, item, ',');) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw InputError("--map entries look like u:v, got '" + item + "'");
    const auto u = g.find(item.substr(0, colon));
    const auto v = g.find(item.substr(colon + 1));
    if (!u || !v) throw InputError("--map names an unknown vertex in '" + item + "'");
    if (map.defined(*u)) throw InputError("--map sends " + g.name(*u) + " twice");
    map.set(*u, *v);
  }
  if (!map.is_injective()) throw InputError("--map is not injective");
  return map;
}

void add_witness_report(Report& report, const Graph& a, const WitnessReport& w) {
  report.add("partial_automorphisms_checked", std::to_string(w.partial_automorphisms_checked));
  if (w.counterexample) {
    report.add("counterexample", format_map(a, w.counterexample->map));
    if (w.counterexample->lang) report.add("counterexample_language", describe(*w.counterexample->lang));
  }
}

Outcome cmd_validate(Session& s, Report& report, const std::string& path) {
  StructureDocument doc = s.load(path);
  const ClassDescriptor desc = s.descriptor(doc);
  report.add("class", "delta=" + std::to_string(desc.delta) + " K=" + std::to_string(desc.K) +
                          " variant=" + to_string(desc.variant));
  const Graph& g = doc.graph;
  for (Vertex u = 0; u < g.size(); ++u) {
    for (Vertex v = u + 1; v < g.size(); ++v) {
      if (!g.has_edge(u, v)) {
        report.add("diagnostic", "graph is incomplete; first missing pair " + describe_pair(g, u, v));
        return {kVerifiedFalse, "incomplete"};
      }
    }
  }
  const auto membership = check_membership(g, desc);
  if (!membership.member) {
    report.add("diagnostic", membership.diagnostic);
    return {kVerifiedFalse, "non-member"};
  }
  if (doc.has_marks() || doc.has_mates()) {
    const auto O = s.orientation(desc.delta);
    const auto check = check_suitable_expansion(doc.gamma(), g, desc, O ? &*O : nullptr);
    if (!check.ok) {
      report.add("diagnostic", check.failure);
      return {kVerifiedFalse, "not-suitable"};
    }
    return {kSuccess, "suitable-expansion"};
  }
  return {kSuccess, "member"};
}

Outcome cmd_complete(Session& s, const std::string& path, const std::string& mode) {
  StructureDocument doc = s.load(path);
  if (mode == "shortest-path") {
    doc.graph = shortest_path_completion(doc.graph);
    s.emit(std::move(doc), std::nullopt);
    return {kSuccess, "completed"};
  }
  const ClassDescriptor desc = s.descriptor(doc);
  if (!doc.f) throw InputError("antipodal completion needs f lines for every pair");
  const auto O = s.orientation(desc.delta);
  doc.graph = antipodal_complete(doc.graph, *doc.f, desc, O ? &*O : nullptr);
  s.emit(std::move(doc), desc);
  return {kSuccess, "completed"};
}

Outcome cmd_fold(Session& s, const std::string& path) {
  StructureDocument doc = s.load(path);
  s.emit(StructureDocument::from_graph(fold(doc.graph)), std::nullopt);
  return {kSuccess, "folded"};
}

Outcome cmd_unfold(Session& s, const std::string& path) {
  const ClassDescriptor desc = s.descriptor_from_flags();
  StructureDocument doc = s.load(path, false);
  if (doc.graph.delta() != desc.delta - 1) {
    throw InputError("a folded graph has delta " + std::to_string(desc.delta - 1) + "; the file says " +
                     std::to_string(doc.graph.delta()));
  }
  s.emit(StructureDocument::from_graph(unfold(doc.graph, desc)), desc);
  return {kSuccess, "unfolded"};
}

Outcome cmd_close(Session& s, const std::string& path) {
  StructureDocument doc = s.load(path);
  const ClassDescriptor desc = s.descriptor(doc);
  const ClosureResult closed = antipodal_closure(doc.graph, desc);
  StructureDocument out = StructureDocument::from_graph(closed.graph);
  for (const auto& [x, y] : closed.matching.edges) {
    out.mates[x] = y;
    out.mates[y] = x;
  }
  s.emit(std::move(out), desc);
  return {kSuccess, "closed"};
}

Outcome cmd_expand(Session& s, Report& report, const std::string& path) {
  StructureDocument doc = s.load(path);
  const ClassDescriptor desc = s.descriptor(doc);
  Graph g = doc.graph;
  if (desc.variant == Variant::EvenBipartite) {
    Graph padded = pad_bipartition(g, desc);
    report.add("padded_vertices", std::to_string(padded.size() - g.size()));
    g = std::move(padded);
  }
  const auto O = s.orientation(desc.delta);
  s.emit(StructureDocument::from_gamma(build_suitable_expansion(g, desc, O ? &*O : nullptr)), desc);
  return {kSuccess, "expanded"};
}

Outcome cmd_extend(Session& s, Report& report, const std::string& path, const std::string& map_text) {
  StructureDocument doc = s.load(path);
  const GammaStructure expanded = doc.gamma();
  const PartialMap phi = parse_map(doc.graph, map_text);
  const GammaPartialAutomorphism p = extend_partial_automorphism(expanded, phi);
  report.add("map", format_map(doc.graph, p.vmap));
  report.add("language", describe(p.lang));
  return {kSuccess, "extended"};
}

Outcome cmd_verify(Session& s, Report& report, const std::string& a_path, const std::string& b_path,
                   const std::string& mode) {
  StructureDocument a = s.load(a_path);
  StructureDocument b = s.load(b_path);
  WitnessReport w;
  if (mode == "plain") {
    w = verify_eppa_witness(a.graph, b.graph);
  } else {
    const GammaStructure bg = b.gamma();
    w = verify_eppa_witness(a.gamma(bg.language()), bg);
  }
  add_witness_report(report, a.graph, w);
  return w.ok ? Outcome{kSuccess, "witness"} : Outcome{kVerifiedFalse, "not-witness"};
}

Outcome cmd_search(Session& s, Report& report, const std::string& path, const std::string& mode, int bound) {
  StructureDocument doc = s.load(path);
  const ClassDescriptor desc = s.descriptor(doc);
  report.add("bound", std::to_string(bound));
  if (mode == "plain") {
    auto witness = search_witness(doc.graph, desc, bound);
    if (!witness) return {kNoResult, "no-witness"};
    report.add("witness_vertices", std::to_string(witness->size()));
    s.emit(StructureDocument::from_graph(std::move(*witness)), desc);
    return {kSuccess, "witness"};
  }
  const auto O = s.orientation(desc.delta);
  PipelineSource source;
  source.search_bound = bound;
  const PipelineResult result = pipeline(doc.graph, desc, source, O ? &*O : nullptr);
  report.add("stage", result.stage);
  if (!result.diagnostic.empty()) report.add("diagnostic", result.diagnostic);
  if (result.witness) {
    report.add("witness_vertices", std::to_string(result.witness->size()));
    report.add("gamma_partial_automorphisms_checked",
               std::to_string(result.gamma_report.partial_automorphisms_checked));
    report.add("plain_partial_automorphisms_checked",
               std::to_string(result.plain_report.partial_automorphisms_checked));
  }
  switch (result.failure) {
    case PipelineResult::Failure::None:
      if (result.witness) s.emit(StructureDocument::from_gamma(*result.witness), desc);
      return {kSuccess, "witness"};
    case PipelineResult::Failure::Input:
      return {kInputError, "input-error"};
    case PipelineResult::Failure::NoWitness:
      return {kNoResult, "no-witness"};
    case PipelineResult::Failure::VerifiedFalse:
      return {kVerifiedFalse, "not-witness"};
  }
  return {kInputError, "input-error"};
}

// Random member: a random partial folded graph, completed in the folded
// class and unfolded. Failed completions are rejected and redrawn.
Outcome cmd_gen(Session& s, Report& report, std::uint64_t seed, int pairs, int max_attempts) {
  const ClassDescriptor desc = s.descriptor_from_flags();
  if (pairs < 1) throw InputError("--pairs must be positive");
  if (desc.delta < 2) throw InputError("gen needs delta >= 2");
  s.mix("gen seed=" + std::to_string(seed) + " pairs=" + std::to_string(pairs) + " delta=" +
        std::to_string(desc.delta) + " K=" + std::to_string(desc.K) + " variant=" + to_string(desc.variant));
  report.add("seed", std::to_string(seed));
  const GeneralClassDescriptor folded = desc.folded();
  std::mt19937_64 rng(seed);
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    GraphBuilder b(desc.delta - 1);
    for (int i = 0; i < pairs; ++i) b.add_vertex("v" + std::to_string(i));
    for (Vertex u = 0; u < pairs; ++u) {
      for (Vertex v = u + 1; v < pairs; ++v) {
        if (rng() % 2 == 0) b.set(u, v, 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(desc.delta - 1)));
      }
    }
    const auto completed = complete_folded(std::move(b).build(), folded);
    if (!completed) continue;
    Graph member = unfold(*completed, desc);
    if (!is_member(member, desc)) continue;
    report.add("attempts", std::to_string(attempt));
    s.emit(StructureDocument::from_graph(std::move(member)), desc);
    return {kSuccess, "generated"};
  }
  report.add("attempts", std::to_string(max_attempts));
  return {kNoResult, "no-instance"};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Antipodal metric spaces: membership, completion, expansions and EPPA witnesses", "antipodal"};
  app.require_subcommand(1);
  app.fallthrough();

  Options options;
  app.add_option("--delta", options.delta, "Diameter (fills a missing delta line; must agree otherwise)");
  app.add_option("--K", options.K, "Class parameter K");
  app.add_option("--variant", options.variant, "odd-nonbipartite | even-bipartite | unrestricted");
  app.add_option("--O", options.orientation, "Orientation set as a comma list, e.g. 2,3,4");
  app.add_option("--out", options.out_path, "Write the resulting structure here instead of stdout");
  app.add_flag("--timing", options.timing, "Add timing_ms to the report");

  std::string file, file_b, mode, map_text;
  int bound = 8;
  std::uint64_t seed = 1;
  int pairs = 3;
  int attempts = 1000;

  auto* validate = app.add_subcommand("validate", "Membership test (and suitability of marks, when present)");
  validate->add_option("file", file)->required();
  auto* complete = app.add_subcommand("complete", "Complete a partial graph");
  complete->add_option("file", file)->required();
  complete->add_option("--mode", mode, "shortest-path | antipodal")
      ->default_val("shortest-path")
      ->check(CLI::IsMember({"shortest-path", "antipodal"}));
  auto* fold_cmd = app.add_subcommand("fold", "Keep one vertex of every delta-edge");
  fold_cmd->add_option("file", file)->required();
  auto* unfold_cmd = app.add_subcommand("unfold", "Double a folded graph (needs --delta and --K of the target class)");
  unfold_cmd->add_option("file", file)->required();
  auto* close = app.add_subcommand("close", "Add antipodal mates");
  close->add_option("file", file)->required();
  auto* expand = app.add_subcommand("expand", "Build the suitable expansion (pads bipartite members first)");
  expand->add_option("file", file)->required();
  auto* extend = app.add_subcommand("extend", "Extend a partial automorphism of an expanded structure");
  extend->add_option("file", file)->required();
  extend->add_option("--map", map_text, "Vertex pairs u:v separated by commas")->required();
  auto* verify = app.add_subcommand("verify-witness", "Check that B is an EPPA-witness for A");
  verify->add_option("a", file)->required();
  verify->add_option("b", file_b)->required();
  verify->add_option("--mode", mode, "plain | gamma")->default_val("plain")->check(CLI::IsMember({"plain", "gamma"}));
  auto* search = app.add_subcommand("search-witness", "Search for a small EPPA-witness");
  search->add_option("file", file)->required();
  search->add_option("--bound", bound, "Largest witness size")->default_val(8);
  search->add_option("--mode", mode, "plain | gamma")->default_val("plain")->check(CLI::IsMember({"plain", "gamma"}));
  auto* gen = app.add_subcommand("gen", "Random member of the class (needs --delta and --K)");
  gen->add_option("--seed", seed, "Generator seed")->default_val(1);
  gen->add_option("--pairs", pairs, "Number of delta-edges")->default_val(3);
  gen->add_option("--attempts", attempts, "Rejection sampling budget")->default_val(1000);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kInputError;
  }

  CLI::App* sub = app.get_subcommands().front();
  Report report;
  Session session(options, report);
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome{kSuccess, ""};
  try {
    if (sub == validate) outcome = cmd_validate(session, report, file);
    else if (sub == complete) outcome = cmd_complete(session, file, mode);
    else if (sub == fold_cmd) outcome = cmd_fold(session, file);
    else if (sub == unfold_cmd) outcome = cmd_unfold(session, file);
    else if (sub == close) outcome = cmd_close(session, file);
    else if (sub == expand) outcome = cmd_expand(session, report, file);
    else if (sub == extend) outcome = cmd_extend(session, report, file, map_text);
    else if (sub == verify) outcome = cmd_verify(session, report, file, file_b, mode);
    else if (sub == search) outcome = cmd_search(session, report, file, mode, bound);
    else outcome = cmd_gen(session, report, seed, pairs, attempts);
  } catch (const NonMetricCycleError& e) {
    report.add("diagnostic", e.what());
    if (session.last()) report.add("cycle", e.cycle().describe(*session.last()));
    outcome = {kNoResult, "non-metric"};
  } catch (const NoCompletionError& e) {
    report.add("diagnostic", e.what());
    outcome = {kNoResult, "no-completion"};
  } catch (const CompletionNotEquivariant& e) {
    report.add("diagnostic", e.what());
    outcome = {kNoResult, "not-equivariant"};
  } catch (const PreconditionError& e) {
    for (const auto& d : e.diagnostics()) report.add("diagnostic", d);
    outcome = {kInputError, "precondition-failed"};
  } catch (const SizeLimitError& e) {
    report.add("diagnostic", e.what());
    outcome = {kInputError, "size-limit"};
  } catch (const InputError& e) {
    report.add("diagnostic", e.what());
    outcome = {kInputError, "input-error"};
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;

  out << "command\t" << sub->get_name() << "\n";
  out << "input_digest\t" << hex64(session.digest()) << "\n";
  out << "outcome\t" << outcome.word << "\n";
  for (const auto& [key, value] : report.fields) out << key << "\t" << value << "\n";
  if (options.timing) {
    out << "timing_ms\t" << std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() << "\n";
  }
  if (report.structure && outcome.code == kSuccess) {
    if (options.out_path) {
      std::ofstream file_out(*options.out_path, std::ios::binary);
      if (!file_out) {
        err << "error: cannot write '" << *options.out_path << "'\n";
        return kInputError;
      }
      file_out << *report.structure;
    } else {
      out << "---\n" << *report.structure;
    }
  }
  return outcome.code;
}

}  // namespace antipodal::cli
