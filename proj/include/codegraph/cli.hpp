#pragma once

// Command dispatch behind the `codegraph` executable. Every command writes
// one report (text or JSON) and returns an exit status:
//   0 success, 1 falsified assertion, 2 invalid config, 3 budget exhausted.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "codegraph/autgroup.hpp"
#include "codegraph/cliques.hpp"
#include "codegraph/graph_search.hpp"
#include "codegraph/grassmann.hpp"
#include "codegraph/hmap.hpp"
#include "codegraph/verify.hpp"

namespace codegraph::cli {

enum class Command { Enum, Graph, Cliques, HmapVerify, Aut, Theorem };
enum class Format { Text, Json };

enum ExitCode : int { kOk = 0, kFalsified = 1, kInvalidConfig = 2, kBudgetExhausted = 3 };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::Enum: return "enum";
    case Command::Graph: return "graph";
    case Command::Cliques: return "cliques";
    case Command::HmapVerify: return "hmap-verify";
    case Command::Aut: return "aut";
    default: return "theorem";
  }
}

inline std::optional<Command> parse_command(std::string_view s) {
  for (auto c : {Command::Enum, Command::Graph, Command::Cliques, Command::HmapVerify, Command::Aut, Command::Theorem})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

struct RunConfig {
  Command command = Command::Enum;
  int n = 4, k = 2, q = 2;
  Format format = Format::Text;
  std::size_t jobs = 1;
  std::optional<double> budget_secs;
  std::optional<std::string> out;
  bool nondegenerate = false;
  // Adds one false edge after building the graph (graph, cliques,
  // hmap-verify) so the failure path can be exercised.
  bool inject_fault = false;
  // Report wall_ms as 0 so theorem output is byte-stable.
  bool no_timing = false;
  // Orbit-reduced search levels for theorem; unset means 0 at n = 4 and 8 at n = 5.
  std::optional<std::size_t> symmetry_depth;
  // theorem: per-embedding verdict file.
  std::optional<std::string> witnesses;
};

// Desk bounds enforced before any work is done.
inline constexpr int kMaxGraphDim = 7;
inline constexpr int kMaxHmapDim = 10;
inline constexpr std::size_t kMaxJobs = 256;
// Direct automorphism search visits every automorphism, so it runs only on
// small graphs whose group order is known to be small.
inline constexpr std::size_t kMaxDirectSearchVertices = 40;
inline constexpr std::uint64_t kMaxDirectSearchOrder = 1'000'000;

using Json = nlohmann::ordered_json;

namespace detail {

inline bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

// Empty when the config is usable for its command.
inline std::string config_problem(const RunConfig& c) {
  if (!is_prime(c.q) || c.q > 13) return "q must be a prime <= 13";
  if (c.jobs < 1 || c.jobs > kMaxJobs) return "jobs must be in 1.." + std::to_string(kMaxJobs);
  if (c.budget_secs && !(*c.budget_secs > 0)) return "budget-secs must be positive";
  const int max_n = c.q == 2 ? kMaxDim : kMaxDim / 2;
  switch (c.command) {
    case Command::Enum:
      if (c.n < 1 || c.n > max_n) return "n must be in 1.." + std::to_string(max_n);
      if (c.k < 0 || c.k > c.n) return "k must be in 0..n";
      if (gaussian_binomial(c.n, c.k, c.q) > kMaxEnumeration) return "Grassmannian too large to enumerate";
      break;
    case Command::Graph:
    case Command::Cliques:
    case Command::Aut:
      if (c.n < 2 || c.n > kMaxGraphDim) return "n must be in 2.." + std::to_string(kMaxGraphDim);
      if (c.k < 1 || c.k >= c.n) return "k must be in 1..n-1";
      if (gaussian_binomial(c.n, c.k, c.q) > 20000) return "graph too large for desk scale";
      break;
    case Command::HmapVerify:
      if (c.q != 2 || c.k != 2) return "hmap-verify is defined for k = 2, q = 2";
      if (c.n < 4 || c.n > kMaxHmapDim) return "n must be in 4.." + std::to_string(kMaxHmapDim);
      break;
    case Command::Theorem:
      if (c.q != 2 || c.k != 2) return "theorem is defined for k = 2, q = 2";
      if (c.n != 4 && c.n != 5) return "theorem supports n = 4 and n = 5";
      if (c.symmetry_depth && *c.symmetry_depth > 13) return "symmetry-depth must be <= 13";
      if (c.n == 5 && c.symmetry_depth == std::size_t{0} && !c.budget_secs)
        return "an unreduced n = 5 search needs --budget-secs";
      break;
  }
  return {};
}

inline std::vector<std::string> subspace_rows(const Subspace& x) {
  std::vector<std::string> rows;
  std::istringstream in(x.to_text());
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) rows.push_back(line);
  return rows;
}

// One-line form: rows separated by spaces.
inline std::string inline_text(const Subspace& x) {
  std::string s;
  for (const auto& r : subspace_rows(x)) s += (s.empty() ? "" : " ") + r;
  return s.empty() ? "0" : s;
}

// Joins the first non-adjacent pair accepted by `pick`, in both directions.
template <class Pick>
void add_false_edge(CodeGraph& g, Pick pick) {
  for (VertexId a = 0; a < g.size(); ++a)
    for (VertexId b = a + 1; b < g.size(); ++b)
      if (!g.adjacent(a, b) && pick(a, b)) {
        g.corrupt_adjacency(a, b);
        g.corrupt_adjacency(b, a);
        return;
      }
}

inline CodeGraph build(const RunConfig& c) {
  auto g = build_graph(c.n, c.k, c.q, c.nondegenerate ? GraphKind::NonDegenerate : GraphKind::FullGrassmann);
  if (c.inject_fault) add_false_edge(g, [](VertexId, VertexId) { return true; });
  return g;
}

struct Outcome {
  int code = kOk;
  std::string body;
};

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Outcome run_enum(const RunConfig& c) {
  const auto all = enumerate_subspaces(c.n, c.k, c.q);
  if (c.format == Format::Text) return {kOk, write_blocks(all)};
  Json j;
  j["n"] = c.n;
  j["k"] = c.k;
  j["q"] = c.q;
  j["count"] = all.size();
  j["subspaces"] = Json::array();
  for (const auto& x : all) j["subspaces"].push_back(subspace_rows(x));
  return {kOk, dump(j)};
}

inline Outcome run_graph(const RunConfig& c) {
  const auto g = build(c);
  const auto problems = check_graph_invariants(g);
  const int code = problems.empty() ? kOk : kFalsified;
  if (c.out) {
    std::ofstream side(*c.out + ".vertices");
    write_vertex_sidecar(side, g);
    if (!side) throw Error("cannot write " + *c.out + ".vertices");
  }
  if (c.format == Format::Text) {
    std::ostringstream os;
    write_graph(os, g);
    for (const auto& p : problems) os << "# invariant violated: " << p << '\n';
    return {code, os.str()};
  }
  Json j;
  j["n"] = g.n();
  j["k"] = g.k();
  j["q"] = g.q();
  j["kind"] = to_string(g.kind());
  j["vertices"] = g.size();
  j["edges"] = g.edge_count();
  j["components"] = connected_components(g).size();
  j["invariants_hold"] = problems.empty();
  j["problems"] = problems;
  j["adjacency"] = Json::array();
  for (VertexId v = 0; v < g.size(); ++v) j["adjacency"].push_back(g.neighbors(v).to_hex());
  return {code, dump(j)};
}

inline Outcome run_cliques(const RunConfig& c) {
  const auto g = build(c);
  auto problems = check_graph_invariants(g);
  const auto cls = enumerate_maximal_cliques(g);
  std::size_t stars = 0, tops = 0, neither = 0, maximal_stars = 0;
  for (const auto& x : cls) {
    (x.verdict == CliqueVerdict::Star ? stars : x.verdict == CliqueVerdict::Top ? tops : neither) += 1;
    maximal_stars += x.is_maximal_star;
  }
  // In the full Grassmann graph with 1 < k < n-1 every maximal clique is a
  // star or a top.
  if (g.kind() == GraphKind::FullGrassmann && c.k > 1 && c.k < c.n - 1 && neither)
    problems.push_back(std::to_string(neither) + " maximal cliques are neither star nor top");
  // The criterion must predict exactly which S^c(X) are maximal cliques of
  // the code graph.
  std::size_t criterion_checked = 0;
  if (c.k >= 2) {
    const auto code = build_graph(c.n, c.k, c.q, GraphKind::NonDegenerate);
    const auto found = maximal_cliques(code);
    const std::set<std::vector<VertexId>> cliques(found.begin(), found.end());
    for (const auto& x : enumerate_subspaces(c.n, c.k - 1, c.q)) {
      const auto members = vertices_containing(code, x).indices();
      const std::vector<VertexId> ids(members.begin(), members.end());
      const bool actual = !ids.empty() && cliques.count(ids) > 0;
      if (actual != star_criterion(x, c.n, c.k, c.q)) problems.push_back("star criterion disagrees at " + inline_text(x));
      ++criterion_checked;
    }
  }
  const int code = problems.empty() ? kOk : kFalsified;
  if (c.format == Format::Text) {
    std::ostringstream os;
    os << "# verdict\tcenter/roof\tsize\tmaximal_in_code_graph\tmaximal_star\n";
    for (const auto& x : cls) {
      const auto& anchor = x.center ? x.center : x.roof;
      os << to_string(x.verdict) << '\t' << (anchor ? inline_text(*anchor) : "-") << '\t' << x.vertices.size() << '\t'
         << x.maximal_in_code_graph << '\t' << x.is_maximal_star << '\n';
    }
    os << "# cliques " << cls.size() << " stars " << stars << " tops " << tops << " neither " << neither
       << " maximal_stars " << maximal_stars << " criterion_checked " << criterion_checked << '\n';
    for (const auto& p : problems) os << "# assertion failed: " << p << '\n';
    return {code, os.str()};
  }
  Json j;
  j["n"] = c.n;
  j["k"] = c.k;
  j["q"] = c.q;
  j["kind"] = to_string(g.kind());
  j["cliques"] = Json::array();
  for (const auto& x : cls) {
    Json r;
    r["verdict"] = to_string(x.verdict);
    r["center"] = x.center ? Json(subspace_rows(*x.center)) : Json(nullptr);
    r["roof"] = x.roof ? Json(subspace_rows(*x.roof)) : Json(nullptr);
    r["size"] = x.vertices.size();
    r["maximal_in_code_graph"] = x.maximal_in_code_graph;
    r["maximal_star"] = x.is_maximal_star;
    j["cliques"].push_back(std::move(r));
  }
  j["stars"] = stars;
  j["tops"] = tops;
  j["neither"] = neither;
  j["maximal_stars"] = maximal_stars;
  j["criterion_checked"] = criterion_checked;
  j["problems"] = problems;
  return {code, dump(j)};
}

inline Outcome run_hmap(const RunConfig& c) {
  auto g = build_graph(c.n, 2, 2, GraphKind::NonDegenerate);
  if (c.inject_fault) {
    // An edge whose images are not adjacent, so adjacency preservation fails.
    const SpecialFrame frame(c.n);
    add_false_edge(g, [&](VertexId a, VertexId b) {
      return !is_adjacent(h_map(frame, g.vertex(a)), h_map(frame, g.vertex(b)));
    });
  }
  const auto rep = verify_h(g);
  const int code = rep.all_passed() ? kOk : kFalsified;
  if (c.format == Format::Text) {
    std::ostringstream os;
    os << "n " << rep.n << " codes " << rep.codes << " A " << rep.a << " B " << rep.b << " C " << rep.c << '\n';
    for (const auto& ch : rep.checks) {
      os << (ch.passed ? "PASS " : "FAIL ") << ch.name << '\n';
      for (const auto& w : ch.witnesses) os << "  witness " << inline_text(w) << '\n';
    }
    return {code, os.str()};
  }
  Json j;
  j["n"] = rep.n;
  j["codes"] = rep.codes;
  j["A"] = rep.a;
  j["B"] = rep.b;
  j["C"] = rep.c;
  j["checks"] = Json::array();
  for (const auto& ch : rep.checks) {
    Json r;
    r["name"] = ch.name;
    r["passed"] = ch.passed;
    r["witnesses"] = Json::array();
    for (const auto& w : ch.witnesses) r["witnesses"].push_back(subspace_rows(w));
    j["checks"].push_back(std::move(r));
  }
  j["all_passed"] = rep.all_passed();
  return {code, dump(j)};
}

inline Outcome run_aut(const RunConfig& c) {
  std::optional<std::uint64_t> grassmann_order, code_order, full_direct, code_direct;
  try {
    grassmann_order = GrassmannAutGroup(c.n, c.k, c.q).order();
  } catch (const OutOfRange&) {
  }
  if (c.k > 1 && c.k < c.n - 1) code_order = CodeGraphAutGroup(c.n, c.k, c.q).order();
  const auto full = build_graph(c.n, c.k, c.q, GraphKind::FullGrassmann);
  if (grassmann_order && *grassmann_order <= kMaxDirectSearchOrder && full.size() <= kMaxDirectSearchVertices)
    full_direct = count_graph_automorphisms(full);
  if (code_order && *code_order <= kMaxDirectSearchOrder) {
    const auto code = build_graph(c.n, c.k, c.q, GraphKind::NonDegenerate);
    if (code.size() <= kMaxDirectSearchVertices) code_direct = count_graph_automorphisms(code);
  }
  // Chow: the group generated by GL(n,q) and duality is all of Aut; the
  // monomial group is all of Aut for the code graph.
  bool ok = true;
  if (grassmann_order && full_direct) ok = ok && *grassmann_order == *full_direct;
  if (code_order && code_direct) ok = ok && *code_order == *code_direct;
  const int code = ok ? kOk : kFalsified;
  auto opt = [](const std::optional<std::uint64_t>& v) { return v ? Json(*v) : Json(nullptr); };
  if (c.format == Format::Text) {
    auto txt = [](const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string("-"); };
    std::ostringstream os;
    os << "grassmann_group_order " << txt(grassmann_order) << '\n'
       << "grassmann_direct_search " << txt(full_direct) << '\n'
       << "code_graph_group_order " << txt(code_order) << '\n'
       << "code_graph_direct_search " << txt(code_direct) << '\n'
       << (ok ? "agree" : "DISAGREE") << '\n';
    return {code, os.str()};
  }
  Json j;
  j["n"] = c.n;
  j["k"] = c.k;
  j["q"] = c.q;
  j["grassmann_group_order"] = opt(grassmann_order);
  j["grassmann_direct_search"] = opt(full_direct);
  j["code_graph_group_order"] = opt(code_order);
  j["code_graph_direct_search"] = opt(code_direct);
  j["agree"] = ok;
  return {code, dump(j)};
}

inline Json certificate_json(const Certificate& cert, bool no_timing) {
  Json j;
  j["n"] = cert.n;
  j["k"] = 2;
  j["q"] = 2;
  j["embeddings_total"] = cert.embeddings_total;
  j["extendable"] = cert.extendable;
  j["exceptional"] = cert.exceptional;
  j["unclassified"] = cert.unclassified;
  Json lemmas = Json::object();
  for (const auto& name : lemma_names()) {
    const auto it = cert.lemma_chain.find(name);
    const LemmaTally t = it == cert.lemma_chain.end() ? LemmaTally{} : it->second;
    lemmas[name] = Json{{"passed", t.passed}, {"failed", t.failed}, {"skipped", t.skipped}};
  }
  j["lemma_chain"] = std::move(lemmas);
  j["complete"] = cert.complete;
  j["wall_ms"] = no_timing ? 0 : cert.wall_ms;
  j["holds"] = cert.holds();
  j["classifier"] = cert.classifier;
  j["symmetry_depth"] = cert.symmetry_depth;
  j["search_prefixes"] = cert.search_prefixes;
  j["leaves_searched"] = cert.leaves_searched;
  j["soundness_failures"] = cert.soundness_failures;
  j["witness_failures"] = cert.witness_failures;
  j["classifier_disagreements"] = cert.classifier_disagreements;
  j["dual_corrections"] = cert.dual_corrections;
  j["normalized_identity"] = cert.normalized_identity;
  j["normalized_h"] = cert.normalized_h;
  j["local_identity_held"] = cert.local_identity_held;
  j["max_witness_multiplicity"] = cert.max_witness_multiplicity;
  j["group"] = Json{{"order", cert.group.group_order},
                    {"codes_pointwise_stabilizer", cert.group.codes_stabilizer},
                    {"h_image_pointwise_stabilizer", cert.group.h_image_stabilizer},
                    {"h_extensions", cert.group.h_extensions}};
  return j;
}

// One line per embedding: verdict, target IDs, then the witness matrix rows
// and dual bit on one line. Sorted by target IDs so the file does not depend
// on worker scheduling.
inline void write_witnesses(const std::string& path, std::vector<EmbeddingMap> maps) {
  std::sort(maps.begin(), maps.end(), [](const auto& a, const auto& b) { return a.images < b.images; });
  std::ofstream os(path);
  for (const auto& m : maps) {
    os << to_string(m.verdict.kind);
    for (auto v : m.images) os << ' ' << v;
    if (m.verdict.witness) {
      std::string s = serialize(*m.verdict.witness);
      std::replace(s.begin(), s.end(), '\n', ' ');
      while (!s.empty() && s.back() == ' ') s.pop_back();
      os << " | " << s;
    }
    os << '\n';
  }
  if (!os) throw Error("cannot write " + path);
}

inline Outcome run_theorem(const RunConfig& c) {
  CertifyOptions opts;
  opts.enumeration.jobs = c.jobs;
  opts.enumeration.budget_secs = c.budget_secs;
  opts.enumeration.symmetry_depth = c.symmetry_depth.value_or(c.n == 5 ? 8 : 0);
  std::vector<EmbeddingMap> maps;
  if (c.witnesses) opts.on_embedding = [&](const EmbeddingMap& m) { maps.push_back(m); };
  const auto cert = certify_theorem(c.n, opts);
  if (c.witnesses) write_witnesses(*c.witnesses, std::move(maps));
  const bool falsified = !cert.holds() || !cert.lemma_chain_clean();
  const int code = falsified ? kFalsified : cert.complete ? kOk : kBudgetExhausted;
  const Json j = certificate_json(cert, c.no_timing);
  if (c.format == Format::Json) return {code, dump(j)};
  std::ostringstream os;
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      for (const auto& [sub, v] : value.items()) os << key << '.' << sub << ' ' << v.dump() << '\n';
    } else {
      os << key << ' ' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    }
  }
  os << (code == kOk ? "verdict certified" : code == kBudgetExhausted ? "verdict partial" : "verdict falsified") << '\n';
  return {code, os.str()};
}

}  // namespace detail

// Runs one command. The report goes to config.out when set, otherwise to
// `out`; diagnostics go to `err`.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (const auto problem = detail::config_problem(config); !problem.empty()) {
    err << "invalid config: " << problem << '\n';
    return kInvalidConfig;
  }
  detail::Outcome result;
  try {
    switch (config.command) {
      case Command::Enum: result = detail::run_enum(config); break;
      case Command::Graph: result = detail::run_graph(config); break;
      case Command::Cliques: result = detail::run_cliques(config); break;
      case Command::HmapVerify: result = detail::run_hmap(config); break;
      case Command::Aut: result = detail::run_aut(config); break;
      case Command::Theorem: result = detail::run_theorem(config); break;
    }
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << '\n';
    return kBudgetExhausted;
  } catch (const OutOfRange& e) {
    err << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const DimensionMismatch& e) {
    err << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  }
  if (config.out) {
    std::ofstream f(*config.out);
    f << result.body;
    if (!f) {
      err << "cannot write " << *config.out << '\n';
      return kInvalidConfig;
    }
  } else {
    out << result.body;
  }
  if (result.code == kFalsified) err << "assertion failed; see report\n";
  if (result.code == kBudgetExhausted) err << "budget exhausted; result is not conclusive\n";
  return result.code;
}

}  // namespace codegraph::cli
