#include <gtest/gtest.h>

#include <sstream>
#include <vector>

#include "codegraph/grassmann.hpp"
#include "oracles.hpp"

namespace codegraph {
namespace {

Subspace S(std::initializer_list<const char*> rows) {
  std::vector<FVector> v;
  for (auto r : rows) v.push_back(FVector::parse(r));
  return rref(v);
}

long long binom(int n, int k) {
  long long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// Inclusion-exclusion over the Grassmannians of intersections of j
// coordinate hyperplanes (each (n-j)-dimensional).
long long nondegenerate_count_ie(int n, int k, int q) {
  long long degenerate = 0;
  for (int j = 1; j <= n; ++j) {
    if (n - j < k) continue;
    const long long term = binom(n, j) * static_cast<long long>(gaussian_binomial(n - j, k, q));
    degenerate += (j % 2 ? term : -term);
  }
  return static_cast<long long>(gaussian_binomial(n, k, q)) - degenerate;
}

TEST(Adjacency, Examples) {
  const auto q = S({"1111"});
  const auto p1 = S({"0111"}), p2 = S({"1011"});
  EXPECT_TRUE(is_adjacent(sum(q, p1), sum(q, p2)));
  EXPECT_TRUE(is_adjacent(S({"0111", "1110"}), S({"0111", "0001"})));
  EXPECT_FALSE(is_adjacent(S({"1000", "0100"}), S({"0010", "0001"})));
  EXPECT_THROW(is_adjacent(S({"1000", "0100"}), S({"0010"})), DimensionMismatch);
}

TEST(Nondegenerate, Examples) {
  EXPECT_TRUE(is_nondegenerate(S({"1111", "0111"})));
  EXPECT_FALSE(is_nondegenerate(S({"1000", "0100"})));
  EXPECT_FALSE(is_nondegenerate(S({"0111", "0001"})));
}

TEST(BuildGraph, VertexCounts) {
  EXPECT_EQ(build_graph(4, 2, 2, GraphKind::NonDegenerate).size(), 13u);
  EXPECT_EQ(build_graph(4, 2, 2, GraphKind::FullGrassmann).size(), 35u);
  EXPECT_EQ(build_graph(5, 2, 2, GraphKind::NonDegenerate).size(), 40u);
  EXPECT_EQ(nondegenerate_count_ie(5, 2, 2), 40);
  EXPECT_EQ(nondegenerate_count_ie(4, 2, 2), 13);
}

TEST(BuildGraph, NondegenerateCountMatchesInclusionExclusion) {
  for (int n = 3; n <= 7; ++n) {
    const auto g = build_graph(n, 2, 2, GraphKind::NonDegenerate);
    EXPECT_EQ(static_cast<long long>(g.size()), nondegenerate_count_ie(n, 2, 2)) << n;
  }
  EXPECT_EQ(static_cast<long long>(build_graph(5, 3, 2, GraphKind::NonDegenerate).size()), nondegenerate_count_ie(5, 3, 2));
  EXPECT_EQ(static_cast<long long>(build_graph(4, 2, 3, GraphKind::NonDegenerate).size()), nondegenerate_count_ie(4, 2, 3));
}

TEST(BuildGraph, RangeErrors) {
  EXPECT_THROW(build_graph(4, 0, 2, GraphKind::FullGrassmann), OutOfRange);
  EXPECT_THROW(build_graph(4, 4, 2, GraphKind::FullGrassmann), OutOfRange);
  EXPECT_THROW(build_graph(4, 2, 4, GraphKind::FullGrassmann), OutOfRange);
  EXPECT_THROW(build_graph(9, 2, 3, GraphKind::FullGrassmann), OutOfRange);
}

// Adjacency from the bucketing construction agrees with counting common
// vectors of explicit vector sets.
TEST(BuildGraph, AdjacencyMatchesVectorSetOracle) {
  struct Case { int n, k, q; GraphKind kind; };
  for (auto c : {Case{4, 2, 2, GraphKind::FullGrassmann}, Case{5, 2, 2, GraphKind::NonDegenerate},
                 Case{5, 3, 2, GraphKind::FullGrassmann}, Case{4, 2, 3, GraphKind::NonDegenerate}}) {
    const auto g = build_graph(c.n, c.k, c.q, c.kind);
    std::vector<oracle::VecSet> sets;
    for (const auto& v : g.vertices()) {
      std::vector<oracle::Vec> gens;
      for (int r = 0; r < v.dim(); ++r) {
        oracle::Vec d;
        for (int i = 0; i < v.n(); ++i) d.push_back(v.row(r)[i]);
        gens.push_back(d);
      }
      sets.push_back(oracle::span(gens, c.n, c.q));
    }
    const auto meet_size = oracle::ipow(c.q, c.k - 1);
    for (VertexId a = 0; a < g.size(); ++a)
      for (VertexId b = 0; b < g.size(); ++b) {
        const bool expect = a != b && oracle::intersect(sets[a], sets[b]).size() == meet_size;
        ASSERT_EQ(g.adjacent(a, b), expect) << a << " " << b;
      }
    EXPECT_TRUE(check_graph_invariants(g).empty());
  }
}

TEST(BuildGraph, NondegenerateIsFilteredFullEnumeration) {
  const auto full = build_graph(5, 2, 2, GraphKind::FullGrassmann);
  const auto nd = build_graph(5, 2, 2, GraphKind::NonDegenerate);
  std::vector<Subspace> filtered;
  for (const auto& v : full.vertices())
    if (is_nondegenerate(v)) filtered.push_back(v);
  EXPECT_EQ(filtered, nd.vertices());
  // Induced: adjacency agrees with the full graph.
  for (VertexId a = 0; a < nd.size(); ++a)
    for (VertexId b = 0; b < nd.size(); ++b)
      EXPECT_EQ(nd.adjacent(a, b), full.adjacent(*full.index_of(nd.vertex(a)), *full.index_of(nd.vertex(b))));
}

TEST(BuildGraph, FullGrassmannDegreeFormula) {
  for (int q : {2, 3})
    for (int n = 4; n <= (q == 2 ? 6 : 5); ++n)
      for (int k = 2; k <= n - 2; ++k) {
        const auto g = build_graph(n, k, q, GraphKind::FullGrassmann);
        const auto expect = static_cast<std::size_t>(q) * gaussian_binomial(k, k - 1, q) * gaussian_binomial(n - k, 1, q);
        for (VertexId v = 0; v < g.size(); ++v) ASSERT_EQ(g.degree(v), expect);
        EXPECT_EQ(connected_components(g).size(), 1u);
      }
}

TEST(BuildGraph, CompleteRegime) {
  const auto g = build_graph(4, 1, 2, GraphKind::FullGrassmann);
  EXPECT_TRUE(g.complete_regime());
  EXPECT_EQ(g.edge_count(), 15u * 14u / 2u);
  EXPECT_TRUE(build_graph(4, 3, 2, GraphKind::FullGrassmann).complete_regime());
  EXPECT_FALSE(build_graph(4, 2, 2, GraphKind::FullGrassmann).complete_regime());
}

TEST(Components, CodeGraphsConnected) {
  EXPECT_EQ(connected_components(build_graph(4, 2, 2, GraphKind::NonDegenerate)).size(), 1u);
  for (int n = 5; n <= 8; ++n) EXPECT_EQ(connected_components(build_graph(n, 2, 2, GraphKind::NonDegenerate)).size(), 1u) << n;
}

TEST(Components, EdgelessPair) {
  const auto v = enumerate_subspaces(3, 1, 2);
  CodeGraph g(3, 1, 2, GraphKind::FullGrassmann, {v[0], v[1]}, {BitRow(2), BitRow(2)});
  EXPECT_EQ(connected_components(g).size(), 2u);
}

TEST(Export, HeaderAndRows) {
  const auto g = build_graph(4, 2, 2, GraphKind::NonDegenerate);
  std::ostringstream os;
  write_graph(os, g);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "4 2 2 nondegenerate 13 " + std::to_string(g.edge_count()));
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(line.size(), 4u);
    ++rows;
  }
  EXPECT_EQ(rows, 13);
  std::ostringstream side;
  write_vertex_sidecar(side, g);
  EXPECT_EQ(side.str().substr(0, 4), "v 0\n");
}

TEST(Invariants, DetectsCorruption) {
  auto g = build_graph(4, 2, 2, GraphKind::NonDegenerate);
  g.corrupt_adjacency(0, 5);
  EXPECT_FALSE(check_graph_invariants(g).empty());
}

}  // namespace
}  // namespace codegraph
