#pragma once

// Maximal cliques of Grassmann and code graphs, classified as stars S(X)
// (all k-spaces through a (k-1)-space X) or tops G_k(Y) (all k-spaces inside
// a (k+1)-space Y).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "codegraph/bitrow.hpp"
#include "codegraph/fqlinalg.hpp"
#include "codegraph/grassmann.hpp"
#include "codegraph/hmap.hpp"

namespace codegraph {

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// k-dimensional supersets of x, optionally only the non-degenerate ones.
inline std::vector<Subspace> star(const Subspace& x, int k, bool restrict) {
  if (x.dim() != k - 1) throw DimensionMismatch("star center must have dimension k-1");
  auto out = supersets_of(x);
  if (restrict) std::erase_if(out, [](const Subspace& s) { return !is_nondegenerate(s); });
  return out;
}

// k-dimensional subspaces of y, optionally only the non-degenerate ones.
inline std::vector<Subspace> top(const Subspace& y, int k, bool restrict) {
  if (y.dim() != k + 1) throw DimensionMismatch("top roof must have dimension k+1");
  auto out = subspaces_of(y, k);
  if (restrict) std::erase_if(out, [](const Subspace& s) { return !is_nondegenerate(s); });
  return out;
}

// All maximal cliques, each as a sorted vertex list; the list is sorted.
// Bron–Kerbosch with Tomita pivoting over bit rows.
inline std::vector<std::vector<VertexId>> maximal_cliques(const CodeGraph& g, std::size_t budget = 1'000'000) {
  std::vector<std::vector<VertexId>> out;
  std::vector<VertexId> current;
  auto expand = [&](auto&& self, BitRow cand, BitRow excl) -> void {
    if (cand.none() && excl.none()) {
      if (out.size() >= budget) throw BudgetExceeded("maximal clique budget exceeded");
      out.push_back(current);
      return;
    }
    // Pivot: the vertex of cand ∪ excl with most neighbours in cand.
    std::size_t pivot = 0, best = 0;
    bool have = false;
    auto consider = [&](std::size_t u) {
      const std::size_t c = (cand & g.neighbors(static_cast<VertexId>(u))).count();
      if (!have || c > best) {
        pivot = u;
        best = c;
        have = true;
      }
    };
    cand.for_each(consider);
    excl.for_each(consider);
    BitRow branch = cand;
    branch.and_not(g.neighbors(static_cast<VertexId>(pivot)));
    branch.for_each([&](std::size_t v) {
      const auto& nv = g.neighbors(static_cast<VertexId>(v));
      current.push_back(static_cast<VertexId>(v));
      self(self, cand & nv, excl & nv);
      current.pop_back();
      cand.reset(v);
      excl.set(v);
    });
  };
  expand(expand, g.all_vertices(), BitRow(g.size()));
  for (auto& c : out) std::sort(c.begin(), c.end());
  std::sort(out.begin(), out.end());
  return out;
}

enum class CliqueVerdict { Star, Top, Neither };

inline const char* to_string(CliqueVerdict v) {
  switch (v) {
    case CliqueVerdict::Star: return "star";
    case CliqueVerdict::Top: return "top";
    default: return "neither";
  }
}

struct CliqueClass {
  std::vector<VertexId> vertices;
  CliqueVerdict verdict = CliqueVerdict::Neither;
  std::optional<Subspace> center;  // set when the clique is S(X) ∩ V(g)
  std::optional<Subspace> roof;    // set when the clique is G_k(Y) ∩ V(g)
  bool maximal_in_code_graph = false;
  bool is_maximal_star = false;

  bool matches_star() const { return center.has_value(); }
  bool matches_top() const { return roof.has_value(); }
};

// Vertices of g containing x.
inline BitRow vertices_containing(const CodeGraph& g, const Subspace& x) {
  BitRow r(g.size());
  for (VertexId v = 0; v < g.size(); ++v)
    if (g.vertex(v).contains(x)) r.set(v);
  return r;
}

// Vertices of g inside y.
inline BitRow vertices_inside(const CodeGraph& g, const Subspace& y) {
  BitRow r(g.size());
  for (VertexId v = 0; v < g.size(); ++v)
    if (y.contains(g.vertex(v))) r.set(v);
  return r;
}

inline BitRow to_bitrow(const CodeGraph& g, const std::vector<VertexId>& ids) {
  BitRow r(g.size());
  for (auto v : ids) r.set(v);
  return r;
}

// Whether the non-degenerate members of the clique form a maximal clique of
// the code graph Γ(n,k)_q. Only vertices of g are consulted, which covers
// Γ(n,k)_q for both graph kinds.
inline bool restricted_clique_is_maximal(const CodeGraph& g, const BitRow& clique) {
  BitRow nondeg(g.size());
  for (VertexId v = 0; v < g.size(); ++v)
    if (is_nondegenerate(g.vertex(v))) nondeg.set(v);
  const BitRow members = clique & nondeg;
  if (members.none()) return false;
  BitRow common = nondeg;
  members.for_each([&](std::size_t v) { common &= g.neighbors(static_cast<VertexId>(v)); });
  common.and_not(members);
  return common.none();
}

inline CliqueClass classify_clique(const CodeGraph& g, std::vector<VertexId> clique) {
  CliqueClass c;
  c.vertices = std::move(clique);
  const BitRow members = to_bitrow(g, c.vertices);
  const int k = g.k();
  if (c.vertices.size() >= 2) {
    Subspace meet = g.vertex(c.vertices[0]);
    Subspace join = meet;
    for (auto v : c.vertices) {
      meet = intersect(meet, g.vertex(v));
      join = sum(join, g.vertex(v));
    }
    if (meet.dim() == k - 1 && vertices_containing(g, meet) == members) c.center = meet;
    if (join.dim() == k + 1 && vertices_inside(g, join) == members) c.roof = join;
  }
  c.verdict = c.center ? CliqueVerdict::Star : c.roof ? CliqueVerdict::Top : CliqueVerdict::Neither;
  c.maximal_in_code_graph = restricted_clique_is_maximal(g, members);
  if (c.center && is_nondegenerate(*c.center)) {
    const auto full_star = static_cast<std::size_t>(gaussian_binomial(g.n() - k + 1, 1, g.q()));
    c.is_maximal_star = c.vertices.size() == full_star;
  }
  return c;
}

inline std::vector<CliqueClass> enumerate_maximal_cliques(const CodeGraph& g, std::size_t budget = 1'000'000) {
  std::vector<CliqueClass> out;
  for (auto& c : maximal_cliques(g, budget)) out.push_back(classify_clique(g, std::move(c)));
  return out;
}

// Whether S^c(X) = C(n,k)_q ∩ S(X) is a maximal clique of Γ(n,k)_q: always
// for q >= 3; for q = 2 iff at most n-k-1 coordinate hyperplanes contain X.
inline bool star_criterion(const Subspace& x, int n, int k, int q) {
  if (x.dim() != k - 1 || x.n() != n || x.field().q() != q) throw DimensionMismatch("star_criterion needs a (k-1)-space of F_q^n");
  if (q >= 3) return true;
  int containing = 0;
  for (int i = 1; i <= n; ++i)
    if (coordinate_hyperplane(i, n, x.field()).contains(x)) ++containing;
  return containing <= n - k - 1;
}

// The two readings of "P = Q or P = P_I with |I| >= 3" for q = k = 2: the
// literal support of P, or an index set drawn from {1..n-1} (P written as
// P_I when n is outside its support).
struct StarCriterionReadings {
  bool literal_support = false;
  bool index_within_first_n_minus_1 = false;
};

inline StarCriterionReadings star_criterion_readings(const Subspace& point) {
  const int n = point.n();
  const SupportSet s = support_of(point);
  StarCriterionReadings r;
  const bool is_q = s == SupportSet::full(n);
  r.literal_support = is_q || s.size() >= 3;
  r.index_within_first_n_minus_1 = is_q || (!s.contains(n) && s.size() >= 3);
  return r;
}

}  // namespace codegraph
