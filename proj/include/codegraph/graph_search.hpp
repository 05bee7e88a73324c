#pragma once

// Backtracking search for injective adjacency-preserving maps between two
// graphs given by bit-row adjacency.
//
// Pattern vertices are assigned in a fixed order: at each step the vertex
// with most already-assigned neighbours, ties broken by a rank (vertex ID by
// default). Every unassigned vertex keeps a candidate set: the intersection
// of the target neighbourhoods of its assigned neighbours' images, minus used
// targets. With `induced` set, non-neighbours must also map to
// non-neighbours.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "codegraph/bitrow.hpp"
#include "codegraph/grassmann.hpp"

namespace codegraph {

struct MorphismSearchOptions {
  bool induced = false;
  // Require equal degrees (automorphism search); otherwise target degree must
  // be at least the pattern degree.
  bool equal_degree = false;
  // Tie-break rank per pattern vertex; empty means rank = vertex ID.
  std::vector<std::size_t> tie_rank;
  // Pick the unassigned vertex with the fewest candidates at each step
  // instead of following the static order.
  bool smallest_domain_first = false;
};

class MorphismSearch {
 public:
  // Return false from the visitor to stop the whole search.
  using Visitor = std::function<bool(const std::vector<VertexId>& images)>;

  MorphismSearch(const CodeGraph& pattern, const CodeGraph& target, MorphismSearchOptions opts = {})
      : pattern_(pattern), target_(target), opts_(std::move(opts)) {
    words_ = (target_.size() + 63) / 64;
    build_order();
    allowed_.assign(pattern_.size(), BitRow(target_.size()));
    for (VertexId v = 0; v < pattern_.size(); ++v) {
      const auto d = pattern_.degree(v);
      for (VertexId t = 0; t < target_.size(); ++t) {
        const auto td = target_.degree(t);
        if (opts_.equal_degree ? td == d : td >= d) allowed_[v].set(t);
      }
    }
  }

  const std::vector<VertexId>& order() const { return order_; }

  // Candidates for the first vertex in the order; subtrees below distinct
  // candidates are disjoint.
  std::vector<VertexId> first_level() const {
    if (order_.empty()) return {};
    std::vector<VertexId> out;
    allowed_[order_[0]].for_each([&](std::size_t t) { out.push_back(static_cast<VertexId>(t)); });
    return out;
  }

  // Runs the subtree where the first ordered vertex maps to `first_image`.
  // Returns false if the visitor stopped the search.
  bool run_subtree(VertexId first_image, const Visitor& visit, const std::atomic<bool>* stop = nullptr) const {
    return run_prefix(std::vector<VertexId>{first_image}, visit, stop);
  }

  // Runs the subtree where order()[i] maps to prefix[i] for every i.
  bool run_prefix(const std::vector<VertexId>& prefix, const Visitor& visit, const std::atomic<bool>* stop = nullptr) const {
    const std::size_t m = pattern_.size();
    if (prefix.size() > m) throw Error("prefix longer than the pattern");
    State st{std::vector<VertexId>(m, 0), std::vector<std::uint64_t>((m + 1) * m * words_, 0), order_, &prefix, stop};
    std::uint64_t* base = st.domains.data();
    for (std::size_t u = 0; u < m; ++u)
      for (std::size_t w = 0; w < words_; ++w) base[u * words_ + w] = allowed_[u].word(w);
    return descend(st, 0, visit);
  }

  bool run(const Visitor& visit) const {
    if (pattern_.size() == 0) return visit({});
    for (VertexId t : first_level())
      if (!run_subtree(t, visit)) return false;
    return true;
  }

  std::size_t count() const {
    std::size_t c = 0;
    run([&](const std::vector<VertexId>&) {
      ++c;
      return true;
    });
    return c;
  }

 private:
  // domains holds one layer of per-vertex candidate bit rows per depth.
  struct State {
    std::vector<VertexId> images;
    std::vector<std::uint64_t> domains;
    std::vector<VertexId> remaining;  // positions >= depth are unassigned
    const std::vector<VertexId>* prefix;
    const std::atomic<bool>* stop;
  };

  void build_order() {
    const std::size_t m = pattern_.size();
    std::vector<std::size_t> rank = opts_.tie_rank;
    if (rank.empty()) {
      rank.resize(m);
      std::iota(rank.begin(), rank.end(), std::size_t{0});
    }
    if (rank.size() != m) throw Error("tie rank must cover every pattern vertex");
    std::vector<bool> placed(m, false);
    std::vector<std::size_t> assigned_nbrs(m, 0);
    for (std::size_t step = 0; step < m; ++step) {
      std::size_t best = m;
      for (std::size_t v = 0; v < m; ++v) {
        if (placed[v]) continue;
        if (best == m || assigned_nbrs[v] > assigned_nbrs[best] ||
            (assigned_nbrs[v] == assigned_nbrs[best] && rank[v] < rank[best]))
          best = v;
      }
      placed[best] = true;
      order_.push_back(static_cast<VertexId>(best));
      pattern_.neighbors(static_cast<VertexId>(best)).for_each([&](std::size_t u) { ++assigned_nbrs[u]; });
    }
  }

  // Assigns the vertex at position `depth` of st.remaining to each candidate
  // in turn. The next layer takes every later vertex's domain minus the used
  // target, intersected with the target neighbourhood for pattern neighbours
  // (and its complement for non-neighbours when induced); an empty domain
  // prunes the branch.
  bool descend(State& st, std::size_t depth, const Visitor& visit) const {
    const std::size_t m = order_.size();
    if (st.stop && st.stop->load(std::memory_order_relaxed)) return false;
    const std::size_t layer = m * words_;
    const std::uint64_t* cur = st.domains.data() + depth * layer;
    std::uint64_t* nxt = st.domains.data() + (depth + 1) * layer;
    const bool forced = depth < st.prefix->size();
    if (opts_.smallest_domain_first && !forced) {
      std::size_t best = depth, best_size = ~std::size_t{0};
      for (std::size_t j = depth; j < m; ++j) {
        std::size_t c = 0;
        for (std::size_t x = 0; x < words_; ++x) c += static_cast<std::size_t>(std::popcount(cur[st.remaining[j] * words_ + x]));
        if (c < best_size) best = j, best_size = c;
      }
      std::rotate(st.remaining.begin() + static_cast<std::ptrdiff_t>(depth), st.remaining.begin() + static_cast<std::ptrdiff_t>(best),
                  st.remaining.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    }
    const VertexId v = st.remaining[depth];
    const BitRow& nv = pattern_.neighbors(v);
    bool go_on = true;
    for (std::size_t w = 0; w < words_ && go_on; ++w) {
      std::uint64_t bits = cur[v * words_ + w];
      if (forced) {
        const VertexId p = (*st.prefix)[depth];
        bits = (p >> 6) == w ? bits & (std::uint64_t{1} << (p & 63)) : 0;
      }
      for (; bits && go_on; bits &= bits - 1) {
        const std::size_t t = (w << 6) + static_cast<std::size_t>(std::countr_zero(bits));
        st.images[v] = static_cast<VertexId>(t);
        if (depth + 1 == m) {
          go_on = visit(st.images);
          continue;
        }
        const BitRow& nt = target_.neighbors(static_cast<VertexId>(t));
        bool alive = true;
        for (std::size_t e = depth + 1; e < m && alive; ++e) {
          const std::size_t u = st.remaining[e];
          std::uint64_t* d = nxt + u * words_;
          const std::uint64_t* c = cur + u * words_;
          std::uint64_t any = 0;
          if (nv.test(u)) {
            for (std::size_t x = 0; x < words_; ++x) any |= (d[x] = c[x] & nt.word(x));
          } else if (opts_.induced) {
            for (std::size_t x = 0; x < words_; ++x) any |= (d[x] = c[x] & ~nt.word(x));
          } else {
            for (std::size_t x = 0; x < words_; ++x) any |= (d[x] = c[x]);
          }
          const std::uint64_t bit = std::uint64_t{1} << (t & 63);
          if (d[t >> 6] & bit) {
            d[t >> 6] &= ~bit;
            any = 0;
            for (std::size_t x = 0; x < words_; ++x) any |= d[x];
          }
          alive = any != 0;
        }
        if (alive) go_on = descend(st, depth + 1, visit);
      }
    }
    return go_on;
  }

  const CodeGraph& pattern_;
  const CodeGraph& target_;
  MorphismSearchOptions opts_;
  std::vector<VertexId> order_;
  std::size_t words_ = 0;
  std::vector<BitRow> allowed_;
};

// Number of automorphisms of g, by exhaustive induced self-map search.
inline std::size_t count_graph_automorphisms(const CodeGraph& g) {
  return MorphismSearch(g, g, {.induced = true, .equal_degree = true, .tie_rank = {}}).count();
}

}  // namespace codegraph
