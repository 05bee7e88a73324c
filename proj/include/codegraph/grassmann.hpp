#pragma once

// Grassmann graphs Γ_k(V) and their induced subgraphs on non-degenerate
// codes.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <vector>

#include "codegraph/bitrow.hpp"
#include "codegraph/fqlinalg.hpp"

namespace codegraph {

using VertexId = std::uint32_t;

enum class GraphKind { FullGrassmann, NonDegenerate };

inline const char* to_string(GraphKind kind) {
  return kind == GraphKind::FullGrassmann ? "full" : "nondegenerate";
}

inline bool is_adjacent(const Subspace& x, const Subspace& y) {
  x.check_same(y.n(), y.field());
  if (x.dim() != y.dim()) throw DimensionMismatch("adjacency needs subspaces of equal dimension");
  return intersection_dim(x, y) == x.dim() - 1;
}

// True iff no coordinate hyperplane contains x, i.e. the canonical basis has
// no zero column.
inline bool is_nondegenerate(const Subspace& x) {
  Word support = 0;
  for (Word r : x.rows()) support |= r;
  const FieldSpec& f = x.field();
  for (int i = 0; i < x.n(); ++i)
    if (f.digit(support, x.n(), i) == 0) return false;
  return true;
}

// Vertex IDs are positions in the lexicographically sorted vertex list.
class CodeGraph {
 public:
  CodeGraph() = default;

  CodeGraph(int n, int k, int q, GraphKind kind, std::vector<Subspace> vertices, std::vector<BitRow> adjacency)
      : n_(n), k_(k), q_(q), kind_(kind), vertices_(std::move(vertices)), adjacency_(std::move(adjacency)) {}

  int n() const { return n_; }
  int k() const { return k_; }
  int q() const { return q_; }
  GraphKind kind() const { return kind_; }

  std::size_t size() const { return vertices_.size(); }
  const std::vector<Subspace>& vertices() const { return vertices_; }
  const Subspace& vertex(VertexId v) const { return vertices_[v]; }
  const BitRow& neighbors(VertexId v) const { return adjacency_[v]; }
  bool adjacent(VertexId a, VertexId b) const { return adjacency_[a].test(b); }
  std::size_t degree(VertexId v) const { return adjacency_[v].count(); }

  std::size_t edge_count() const {
    std::size_t twice = 0;
    for (const auto& r : adjacency_) twice += r.count();
    return twice / 2;
  }

  std::optional<VertexId> index_of(const Subspace& s) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), s);
    if (it == vertices_.end() || !(*it == s)) return std::nullopt;
    return static_cast<VertexId>(it - vertices_.begin());
  }

  // k = 1 and k = n - 1 give complete graphs.
  bool complete_regime() const { return k_ == 1 || k_ == n_ - 1; }

  BitRow all_vertices() const { return BitRow::full(size()); }

  // Test hook: flips one directed adjacency bit.
  void corrupt_adjacency(VertexId a, VertexId b) { adjacency_[a].flip(b); }

 private:
  int n_ = 0, k_ = 0, q_ = 2;
  GraphKind kind_ = GraphKind::FullGrassmann;
  std::vector<Subspace> vertices_;
  std::vector<BitRow> adjacency_;
};

// Adjacent k-subspaces share exactly one (k-1)-subspace, so edges come from
// bucketing vertices by their (k-1)-subspaces.
inline std::vector<BitRow> adjacency_by_shared_hyperplanes(const std::vector<Subspace>& vertices) {
  const std::size_t count = vertices.size();
  std::vector<BitRow> adj(count, BitRow(count));
  if (count == 0) return adj;
  const int k = vertices.front().dim();
  std::vector<std::pair<Subspace, VertexId>> keyed;
  for (VertexId v = 0; v < count; ++v)
    for (auto& h : subspaces_of(vertices[v], k - 1)) keyed.emplace_back(std::move(h), v);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (auto c = a.first <=> b.first; c != 0) return c < 0;
    return a.second < b.second;
  });
  for (std::size_t lo = 0; lo < keyed.size();) {
    std::size_t hi = lo + 1;
    while (hi < keyed.size() && keyed[hi].first == keyed[lo].first) ++hi;
    for (std::size_t a = lo; a < hi; ++a)
      for (std::size_t b = a + 1; b < hi; ++b) {
        adj[keyed[a].second].set(keyed[b].second);
        adj[keyed[b].second].set(keyed[a].second);
      }
    lo = hi;
  }
  return adj;
}

inline CodeGraph build_graph(int n, int k, int q, GraphKind kind) {
  const FieldSpec f(q);
  if (n < 2 || n > f.max_dim()) throw OutOfRange("n outside supported range");
  if (k < 1 || k > n - 1) throw OutOfRange("k must satisfy 1 <= k <= n-1");
  auto vertices = enumerate_subspaces(n, k, q);
  if (kind == GraphKind::NonDegenerate)
    std::erase_if(vertices, [](const Subspace& s) { return !is_nondegenerate(s); });
  auto adj = adjacency_by_shared_hyperplanes(vertices);
  return CodeGraph(n, k, q, kind, std::move(vertices), std::move(adj));
}

inline std::vector<std::vector<VertexId>> connected_components(const CodeGraph& g) {
  std::vector<std::vector<VertexId>> out;
  BitRow seen(g.size());
  for (VertexId s = 0; s < g.size(); ++s) {
    if (seen.test(s)) continue;
    std::vector<VertexId> comp;
    std::queue<VertexId> frontier;
    frontier.push(s);
    seen.set(s);
    while (!frontier.empty()) {
      const VertexId v = frontier.front();
      frontier.pop();
      comp.push_back(v);
      g.neighbors(v).for_each([&](std::size_t u) {
        if (!seen.test(u)) {
          seen.set(u);
          frontier.push(static_cast<VertexId>(u));
        }
      });
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

// Problems found by a direct re-check of the graph invariants; empty when
// the graph is sound.
inline std::vector<std::string> check_graph_invariants(const CodeGraph& g) {
  std::vector<std::string> problems;
  for (VertexId a = 0; a < g.size(); ++a) {
    if (g.adjacent(a, a)) problems.push_back("self-loop at " + std::to_string(a));
    if (g.kind() == GraphKind::NonDegenerate && !is_nondegenerate(g.vertex(a)))
      problems.push_back("degenerate vertex " + std::to_string(a));
    for (VertexId b = a + 1; b < g.size(); ++b) {
      if (g.adjacent(a, b) != g.adjacent(b, a))
        problems.push_back("asymmetric edge " + std::to_string(a) + "," + std::to_string(b));
      const bool expect = intersection_dim(g.vertex(a), g.vertex(b)) == g.k() - 1;
      if (g.adjacent(a, b) != expect || g.adjacent(b, a) != expect)
        problems.push_back("edge mismatch " + std::to_string(a) + "," + std::to_string(b));
    }
  }
  return problems;
}

// Header "n k q kind |V| |E|" then one hex adjacency row per vertex.
inline void write_graph(std::ostream& os, const CodeGraph& g) {
  os << g.n() << ' ' << g.k() << ' ' << g.q() << ' ' << to_string(g.kind()) << ' ' << g.size() << ' '
     << g.edge_count() << '\n';
  for (VertexId v = 0; v < g.size(); ++v) os << g.neighbors(v).to_hex() << '\n';
}

// Sidecar: "v <id>" followed by the subspace rows, blocks separated by blank
// lines.
inline void write_vertex_sidecar(std::ostream& os, const CodeGraph& g) {
  for (VertexId v = 0; v < g.size(); ++v) {
    if (v) os << '\n';
    os << "v " << v << '\n' << g.vertex(v).to_text() << '\n';
  }
}

}  // namespace codegraph
