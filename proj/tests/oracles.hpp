#pragma once

// Test-only oracles. These work on explicit sets of vectors and never call
// the echelon-form code they are used to check.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

// Vectors of F_q^n as digit arrays, coordinate 0 first.
using Vec = std::vector<int>;
using VecSet = std::set<Vec>;

inline std::vector<Vec> all_vectors(int n, int q) {
  std::vector<Vec> out;
  Vec v(static_cast<std::size_t>(n), 0);
  while (true) {
    out.push_back(v);
    int i = n - 1;
    while (i >= 0 && ++v[static_cast<std::size_t>(i)] == q) v[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
  }
  return out;
}

inline Vec add(const Vec& a, const Vec& b, int q) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + b[i]) % q;
  return r;
}

inline Vec scale(const Vec& a, int c, int q) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c % q;
  return r;
}

// Closure of the generators under addition and scaling.
inline VecSet span(const std::vector<Vec>& gens, int n, int q) {
  VecSet s{Vec(static_cast<std::size_t>(n), 0)};
  for (const auto& g : gens) {
    VecSet next;
    for (const auto& v : s)
      for (int c = 0; c < q; ++c) next.insert(add(v, scale(g, c, q), q));
    s = std::move(next);
  }
  return s;
}

inline std::size_t ipow(int q, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<std::size_t>(q);
  return r;
}

// Distinct spans of k-tuples of vectors with exactly q^k elements.
inline std::set<VecSet> all_subspaces_brute(int n, int k, int q) {
  const auto vecs = all_vectors(n, q);
  std::set<VecSet> out;
  std::vector<Vec> gens;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (static_cast<int>(gens.size()) == k) {
      auto s = span(gens, n, q);
      if (s.size() == ipow(q, k)) out.insert(std::move(s));
      return;
    }
    for (std::size_t i = from; i < vecs.size(); ++i) {
      gens.push_back(vecs[i]);
      self(self, i + 1);
      gens.pop_back();
    }
  };
  rec(rec, 1);
  if (k == 0) out.insert(span({}, n, q));
  return out;
}

inline VecSet intersect(const VecSet& a, const VecSet& b) {
  VecSet r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(r, r.begin()));
  return r;
}

}  // namespace oracle
