#pragma once

// Exhaustive check that every embedding of the graph of non-degenerate
// [n,2]_2 codes into the Grassmann graph Γ_2(F_2^n) is either the restriction
// of an automorphism of Γ_2(F_2^n) or such an automorphism composed with h.
//
// An embedding is an injective map of code vertices to 2-subspaces that
// sends adjacent codes to adjacent subspaces (non-adjacent pairs may become
// adjacent). Embeddings are stored as target vertex IDs into the full
// Grassmann graph.

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "codegraph/autgroup.hpp"
#include "codegraph/graph_search.hpp"
#include "codegraph/hmap.hpp"

namespace codegraph {

struct VertexListHash {
  std::size_t operator()(const std::vector<VertexId>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

// Fixed data shared by every embedding at one n: the code graph, the full
// Grassmann graph, the frame (Q, P_I, H), and index tables.
class TheoremContext {
 public:
  explicit TheoremContext(int n)
      : n_(n),
        frame_(n),
        codes_(build_graph(n, 2, 2, GraphKind::NonDegenerate)),
        grassmann_(build_graph(n, 2, 2, GraphKind::FullGrassmann)) {
    if (n < 4 || n > 6) throw OutOfRange("theorem context supports 4 <= n <= 6");
    const FieldSpec f2(2);
    for (const auto& x : codes_.vertices()) {
      code_target_.push_back(*grassmann_.index_of(x));
      h_subspace_.push_back(h_map(frame_, x));
      h_target_.push_back(*grassmann_.index_of(h_subspace_.back()));
    }
    const std::uint32_t lower = (1u << (n - 1)) - 1;  // subsets of {1..n-1}
    a_code_.resize(lower + 1);
    s_canonical_.resize(lower + 1, Subspace(f2, n));
    for (std::uint32_t b = 1; b <= lower; ++b) {
      const SupportSet s(b);
      a_code_[b] = *codes_.index_of(frame_.a_code(s));
      Subspace span = frame_.Q();
      for (int i : s.members()) span = sum(span, p_upper(SupportSet{i}, n));
      s_canonical_[b] = span;
    }
    // G'_1: Q and every P_I with 3 <= |I| <= n-1.
    g1_domain_.push_back(frame_.Q());
    for (std::uint32_t b = 1; b < SupportSet::full(n).bits(); ++b)
      if (std::popcount(b) >= 3) g1_domain_.push_back(p_point(SupportSet(b), n));
    for (const auto& p : g1_domain_) {
      std::vector<VertexId> members;
      for (VertexId v = 0; v < codes_.size(); ++v)
        if (codes_.vertex(v).contains(p)) members.push_back(v);
      star_members_.push_back(std::move(members));
    }
    for (int i = 1; i <= n; ++i) p_upper_index_.push_back(domain_index(p_upper(SupportSet{i}, n)));
  }

  int n() const { return n_; }
  const SpecialFrame& frame() const { return frame_; }
  const CodeGraph& codes() const { return codes_; }
  const CodeGraph& grassmann() const { return grassmann_; }
  std::uint32_t lower_mask() const { return (1u << (n_ - 1)) - 1; }

  VertexId code_target(VertexId v) const { return code_target_[v]; }
  const std::vector<VertexId>& identity_images() const { return code_target_; }
  const std::vector<VertexId>& h_images() const { return h_target_; }
  const Subspace& h_subspace(VertexId v) const { return h_subspace_[v]; }

  // Code vertex of A_I, I a non-empty subset of {1..n-1} given as a bitmask.
  VertexId a_index(std::uint32_t bits) const { return a_code_[bits]; }
  // Q + Σ_{i∈I} P^i.
  const Subspace& s_canonical(std::uint32_t bits) const { return s_canonical_[bits]; }

  const std::vector<Subspace>& g1_domain() const { return g1_domain_; }
  // Codes containing g1_domain()[i].
  const std::vector<VertexId>& star_members(std::size_t i) const { return star_members_[i]; }
  // Index of P^i in g1_domain(), i in 1..n.
  std::size_t p_upper_index(int i) const { return p_upper_index_[static_cast<std::size_t>(i - 1)]; }

  std::size_t domain_index(const Subspace& p) const {
    for (std::size_t i = 0; i < g1_domain_.size(); ++i)
      if (g1_domain_[i] == p) return i;
    throw Error("point outside G'_1: " + p.to_inline());
  }

  const Subspace& image(const std::vector<VertexId>& images, VertexId v) const { return grassmann_.vertex(images[v]); }

 private:
  int n_;
  SpecialFrame frame_;
  CodeGraph codes_, grassmann_;
  std::vector<VertexId> code_target_, h_target_;
  std::vector<Subspace> h_subspace_;
  std::vector<VertexId> a_code_;
  std::vector<Subspace> s_canonical_;
  std::vector<Subspace> g1_domain_;
  std::vector<std::vector<VertexId>> star_members_;
  std::vector<std::size_t> p_upper_index_;
};

using LemmaContext = TheoremContext;

enum class VerdictKind { Extendable, Exceptional, Unclassified };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Extendable: return "extendable";
    case VerdictKind::Exceptional: return "exceptional";
    default: return "unclassified";
  }
}

struct Verdict {
  VerdictKind kind = VerdictKind::Unclassified;
  std::optional<GraphAutomorphism> witness;
  // Number of group elements that are witnesses, when known (0 = not counted).
  std::size_t witness_count = 0;
};

struct EmbeddingMap {
  int n = 0;
  std::vector<VertexId> images;  // target vertex IDs in the full Grassmann graph
  Verdict verdict;
};

// Partial map G'_1 -> points, aligned with TheoremContext::g1_domain().
struct PointMap {
  std::vector<std::optional<Subspace>> assignments;

  const std::optional<Subspace>& at(std::size_t i) const { return assignments[i]; }
  bool total() const {
    return std::all_of(assignments.begin(), assignments.end(), [](const auto& p) { return p.has_value(); });
  }
};

// Intersection of a list of subspaces.
inline Subspace meet_of(std::span<const Subspace* const> xs) {
  Subspace m = *xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!xs[i]->contains(m)) m = intersect(m, *xs[i]);
  return m;
}

// g1(P) = the common point of f(S^c(P)), for every P in G'_1.
inline PointMap point_map(const TheoremContext& ctx, const std::vector<VertexId>& images) {
  PointMap pm;
  for (std::size_t i = 0; i < ctx.g1_domain().size(); ++i) {
    std::vector<const Subspace*> xs;
    for (VertexId v : ctx.star_members(i)) xs.push_back(&ctx.image(images, v));
    const Subspace m = meet_of(xs);
    pm.assignments.push_back(m.dim() == 1 ? std::optional<Subspace>(m) : std::nullopt);
  }
  return pm;
}

// Injectivity and adjacency re-checked by a direct double loop, using the
// dimension rule on subspaces rather than the graph bit rows.
inline bool embedding_is_valid(const TheoremContext& ctx, const std::vector<VertexId>& images) {
  const auto& codes = ctx.codes();
  if (images.size() != codes.size()) return false;
  for (VertexId a = 0; a < codes.size(); ++a) {
    if (images[a] >= ctx.grassmann().size()) return false;
    for (VertexId b = a + 1; b < codes.size(); ++b) {
      if (images[a] == images[b]) return false;
      if (is_adjacent(codes.vertex(a), codes.vertex(b)) && !is_adjacent(ctx.image(images, a), ctx.image(images, b))) return false;
    }
  }
  return true;
}

// images of a ∘ f
inline std::optional<std::vector<VertexId>> apply_to_embedding(const TheoremContext& ctx, const GraphAutomorphism& a,
                                                               const std::vector<VertexId>& images) {
  std::vector<VertexId> out;
  out.reserve(images.size());
  for (VertexId t : images) {
    const auto id = ctx.grassmann().index_of(apply(a, ctx.grassmann().vertex(t)));
    if (!id) return std::nullopt;
    out.push_back(*id);
  }
  return out;
}

// --- search ---------------------------------------------------------------

struct EnumerationOptions {
  std::size_t jobs = 1;
  std::optional<double> budget_secs;
  // Tie-break rank over code vertices for the assignment order.
  std::vector<std::size_t> tie_rank;
  bool smallest_domain_first = false;
  // Levels of the search order reduced by the automorphism group (0 = none).
  std::size_t symmetry_depth = 0;
};

// Fixed images for the first vertices of the search order. Every embedding
// extending `images` stands for `weight` embeddings.
struct SearchPrefix {
  std::vector<VertexId> images;
  std::uint64_t weight = 1;
};

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a), b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

using Perm = std::vector<VertexId>;

// Candidates for order[depth] given the images of order[0..depth).
inline std::vector<VertexId> prefix_domain(const TheoremContext& ctx, const std::vector<VertexId>& order,
                                           const std::vector<VertexId>& prefix) {
  const auto& codes = ctx.codes();
  const auto& target = ctx.grassmann();
  const VertexId v = order[prefix.size()];
  BitRow dom = target.all_vertices();
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    dom.reset(prefix[i]);
    if (codes.adjacent(v, order[i])) dom &= target.neighbors(prefix[i]);
  }
  std::vector<VertexId> out;
  dom.for_each([&](std::size_t t) {
    if (target.degree(static_cast<VertexId>(t)) >= codes.degree(v)) out.push_back(static_cast<VertexId>(t));
  });
  return out;
}

inline void expand_prefixes(const TheoremContext& ctx, const std::vector<VertexId>& order, std::size_t max_depth,
                            const std::vector<Perm>& stab, SearchPrefix cur, std::vector<SearchPrefix>& out) {
  if (cur.images.size() >= max_depth || cur.images.size() == order.size() || stab.size() <= 1) {
    out.push_back(std::move(cur));
    return;
  }
  const auto dom = prefix_domain(ctx, order, cur.images);
  UnionFind uf(ctx.grassmann().size());
  for (const auto& p : stab)
    for (std::size_t t = 0; t < p.size(); ++t) uf.unite(t, p[t]);
  std::map<std::size_t, std::vector<VertexId>> orbits;
  for (VertexId t : dom) orbits[uf.find(t)].push_back(t);
  for (const auto& [root, members] : orbits) {
    const VertexId rep = members.front();
    std::vector<Perm> next;
    for (const auto& p : stab)
      if (p[rep] == rep) next.push_back(p);
    SearchPrefix child = cur;
    child.images.push_back(rep);
    child.weight *= members.size();
    expand_prefixes(ctx, order, max_depth, next, std::move(child), out);
  }
}

}  // namespace detail

// One prefix per orbit of partial assignments under Aut(Γ_2(V)), to the
// given depth of the search order. If a fixes the images of a prefix, then
// X -> a(X) maps the embeddings extending (prefix, r) one-to-one onto those
// extending (prefix, a(r)); so searching one representative r per orbit and
// weighting by the orbit size counts every embedding exactly once.
inline std::vector<SearchPrefix> orbit_prefixes(const TheoremContext& ctx, const std::vector<VertexId>& order, std::size_t depth) {
  std::vector<SearchPrefix> out;
  if (depth == 0 || order.empty()) return out;
  const auto& target = ctx.grassmann();
  const GrassmannAutGroup group(ctx.n(), 2, 2);
  const auto dom = detail::prefix_domain(ctx, order, {});
  // Orbits of the whole group on the first domain, one streamed pass each.
  std::vector<char> covered(target.size(), 0);
  for (VertexId r : dom) {
    if (covered[r]) continue;
    const auto& x = target.vertex(r);
    std::vector<GraphAutomorphism> stab;
    group.for_each([&](const GraphAutomorphism& a) {
      const auto ax = apply(a, x);
      covered[*target.index_of(ax)] = 1;
      if (ax == x) stab.push_back(a);
      return true;
    });
    std::vector<detail::Perm> perms;
    perms.reserve(stab.size());
    for (const auto& a : stab) perms.push_back(*vertex_action(a, target));
    // |orbit| = |G| / |stabilizer|.
    const std::uint64_t orbit = group.order() / stab.size();
    detail::expand_prefixes(ctx, order, depth, perms, SearchPrefix{{r}, orbit}, out);
  }
  return out;
}

// Runs fold(state, images, weight) over every embedding extending each
// prefix; with no prefixes the tree is split at the first level. One state
// per prefix, returned in prefix order, so merged results do not depend on
// the job count. `complete` is false if the time budget stopped the search.
template <class State>
std::vector<State> search_embeddings(const TheoremContext& ctx, const EnumerationOptions& opts,
                                     const std::function<void(State&, const std::vector<VertexId>&, std::uint64_t)>& fold,
                                     bool& complete, std::vector<SearchPrefix>* used_prefixes = nullptr) {
  const MorphismSearch search(ctx.codes(), ctx.grassmann(),
                              {.induced = false,
                               .equal_degree = false,
                               .tie_rank = opts.tie_rank,
                               .smallest_domain_first = opts.smallest_domain_first});
  std::vector<SearchPrefix> prefixes;
  if (opts.symmetry_depth > 0) {
    prefixes = orbit_prefixes(ctx, search.order(), opts.symmetry_depth);
  } else {
    for (VertexId t : search.first_level()) prefixes.push_back({{t}, 1});
  }
  if (used_prefixes) *used_prefixes = prefixes;
  std::vector<State> states(prefixes.size());
  std::vector<char> finished(prefixes.size(), 0);
  std::atomic<bool> stop{false};
  std::atomic<std::size_t> next{0};

  std::mutex mu;
  std::condition_variable cv;
  bool done = false;
  std::thread watchdog;
  if (opts.budget_secs) {
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(*opts.budget_secs));
    watchdog = std::thread([&] {
      std::unique_lock lock(mu);
      if (!cv.wait_until(lock, deadline, [&] { return done; })) stop = true;
    });
  }

  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < prefixes.size();) {
      if (stop) return;
      State& st = states[i];
      const std::uint64_t w = prefixes[i].weight;
      const bool ok = search.run_prefix(
          prefixes[i].images,
          [&](const std::vector<VertexId>& images) {
            fold(st, images, w);
            return true;
          },
          &stop);
      if (ok && !stop) finished[i] = 1;
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, opts.jobs);
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (watchdog.joinable()) {
    {
      std::lock_guard lock(mu);
      done = true;
    }
    cv.notify_all();
    watchdog.join();
  }
  complete = std::all_of(finished.begin(), finished.end(), [](char c) { return c != 0; });
  return states;
}

struct EmbeddingList {
  std::vector<std::vector<VertexId>> maps;
  bool complete = true;
};

// Every embedding, each once, in the deterministic search order.
inline EmbeddingList enumerate_embeddings(const TheoremContext& ctx, const EnumerationOptions& opts = {}) {
  if (opts.symmetry_depth) throw Error("listing every embedding needs symmetry_depth = 0");
  if (ctx.n() != 4 && !opts.budget_secs) throw OutOfRange("embedding enumeration beyond n = 4 needs a time budget");
  using Maps = std::vector<std::vector<VertexId>>;
  EmbeddingList out;
  auto parts = search_embeddings<Maps>(
      ctx, opts, [](Maps& m, const std::vector<VertexId>& images, std::uint64_t) { m.push_back(images); }, out.complete);
  for (auto& p : parts)
    for (auto& m : p) out.maps.push_back(std::move(m));
  return out;
}

// --- normalization ----------------------------------------------------------

struct Normalization {
  bool ok = false;
  std::string failure;
  bool dual_correction = false;
  std::vector<VertexId> star_images;  // f after the optional orthocomplement step
  PointMap g1_before;                 // g1 of star_images
  GraphAutomorphism pre_g;            // f' = pre_g ∘ f
  std::vector<VertexId> normalized;   // f'
  PointMap g1_after;                  // g1 of f'
};

inline Normalization normalize(const TheoremContext& ctx, const std::vector<VertexId>& images) {
  const int n = ctx.n();
  const FieldSpec f2(2);
  Normalization r;
  r.pre_g = GraphAutomorphism::identity(f2, n);

  // f(A) must be a star, or (n = 4) a top that the orthocomplement turns into a star.
  const auto& a_members = ctx.star_members(0);
  auto a_meet = [&](const std::vector<VertexId>& im) {
    std::vector<const Subspace*> xs;
    for (VertexId v : a_members) xs.push_back(&ctx.image(im, v));
    return meet_of(xs);
  };
  r.star_images = images;
  if (a_meet(images).dim() != 1) {
    if (2 * 2 != n) {
      r.failure = "image of the maximal star is not a star";
      return r;
    }
    const GraphAutomorphism dual{Matrix::identity(f2, n), true};
    auto flipped = apply_to_embedding(ctx, dual, images);
    if (!flipped || a_meet(*flipped).dim() != 1) {
      r.failure = "image of the maximal star is neither a star nor a top";
      return r;
    }
    r.dual_correction = true;
    r.pre_g = dual;
    r.star_images = std::move(*flipped);
  }

  r.g1_before = point_map(ctx, r.star_images);
  // Rows g1(Q), g1(P^1), ..., g1(P^{n-1}) -> Q, P^1, ..., P^{n-1}.
  std::vector<Word> from, to;
  auto push = [&](std::size_t idx, const Subspace& target) {
    const auto& p = r.g1_before.at(idx);
    if (!p) return false;
    from.push_back(p->rows()[0]);
    to.push_back(target.rows()[0]);
    return true;
  };
  bool ok = push(0, ctx.frame().Q());
  for (int i = 1; i <= n - 1 && ok; ++i) ok = push(ctx.p_upper_index(i), p_upper(SupportSet{i}, n));
  if (!ok) {
    r.failure = "g1 undefined on Q or some P^i";
    return r;
  }
  const auto b = Matrix::from_rows(f2, from);
  if (!b.invertible()) {
    r.failure = "g1(Q), g1(P^1), ..., g1(P^{n-1}) do not span V";
    return r;
  }
  const GraphAutomorphism lin{b.inverse() * Matrix::from_rows(f2, to), false};
  auto out = apply_to_embedding(ctx, lin, r.star_images);
  if (!out) {
    r.failure = "normalizing map leaves the Grassmannian";
    return r;
  }
  r.pre_g = compose(lin, r.pre_g);
  r.normalized = std::move(*out);
  r.g1_after = point_map(ctx, r.normalized);
  r.ok = true;
  return r;
}

// --- lemma chain ------------------------------------------------------------

inline const std::vector<std::string>& lemma_names() {
  static const std::vector<std::string> names{
      "star_image",     "a_images_in_s", "span_is_v",          "a_image_is_q_plus_p", "points_span_v",
      "b_image_is_sum", "normalized",    "s_is_canonical",     "a_codes_fixed",       "points_fixed_or_dual",
      "restriction_embeds", "local_identity_is_global", "parity", "endgame"};
  return names;
}

enum class LemmaStatus { Passed, Failed, Skipped };

struct LemmaResult {
  std::string name;
  LemmaStatus status = LemmaStatus::Skipped;
  std::string witness;  // first failing instance
};

struct LemmaReport {
  std::vector<LemmaResult> results;
  bool is_identity = false;
  bool is_h = false;
  bool local_identity = false;  // f'_I identity for some 3-element I

  const LemmaResult& get(const std::string& name) const {
    for (const auto& r : results)
      if (r.name == name) return r;
    throw Error("unknown lemma " + name);
  }
  bool all_passed() const {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.status == LemmaStatus::Passed; });
  }
};

inline LemmaReport lemma_chain(const TheoremContext& ctx, const Normalization& norm) {
  const int n = ctx.n();
  const auto& frame = ctx.frame();
  const std::uint32_t lower = ctx.lower_mask();
  LemmaReport rep;
  for (const auto& name : lemma_names()) rep.results.push_back({name, LemmaStatus::Skipped, {}});
  auto set = [&](const std::string& name, bool passed, std::string witness = {}) {
    for (auto& r : rep.results)
      if (r.name == name) {
        r.status = passed ? LemmaStatus::Passed : LemmaStatus::Failed;
        if (!passed) r.witness = std::move(witness);
      }
  };
  if (!norm.ok) {
    set("star_image", false, norm.failure);
    return rep;
  }
  set("star_image", true);

  // Images of the A, B codes and the points under f, before the linear
  // normalization.
  const auto& f1 = norm.star_images;
  const auto& g1 = norm.g1_before;
  const auto& gq = g1.at(0);
  {
    std::string bad;
    for (int i = 1; i <= n && bad.empty(); ++i) {
      const auto& gp = g1.at(ctx.p_upper_index(i));
      const auto a_i = *ctx.codes().index_of(frame.a_code(SupportSet{i}));
      if (!gq || !gp || !(ctx.image(f1, a_i) == sum(*gq, *gp))) bad = "i=" + std::to_string(i);
    }
    set("a_image_is_q_plus_p", bad.empty(), bad);
  }
  {
    Subspace span = *gq;
    for (int i = 1; i <= n - 1; ++i) span = sum(span, *g1.at(ctx.p_upper_index(i)));
    set("points_span_v", span.dim() == n, span.to_inline());
  }
  {
    std::string bad;
    for (int i = 1; i <= n - 1 && bad.empty(); ++i)
      for (int j = i + 1; j <= n - 1 && bad.empty(); ++j) {
        const auto pi = p_upper(SupportSet{i}, n), pj = p_upper(SupportSet{j}, n);
        const auto v = *ctx.codes().index_of(sum(pi, pj));
        if (!(ctx.image(f1, v) == sum(*g1.at(ctx.p_upper_index(i)), *g1.at(ctx.p_upper_index(j)))))
          bad = "i=" + std::to_string(i) + " j=" + std::to_string(j);
      }
    set("b_image_is_sum", bad.empty(), bad);
  }

  const auto& f = norm.normalized;
  const auto& g = norm.g1_after;
  auto img = [&](VertexId v) -> const Subspace& { return ctx.image(f, v); };

  // S_I = span of f'(A_i), i ∈ I.
  std::vector<Subspace> s(lower + 1, Subspace(FieldSpec(2), n));
  for (std::uint32_t b = 1; b <= lower; ++b) {
    const int low = std::countr_zero(b);
    const std::uint32_t rest = b & (b - 1);
    s[b] = rest ? sum(s[rest], img(ctx.a_index(1u << low))) : img(ctx.a_index(b));
  }

  {
    std::string bad;
    for (std::uint32_t b = 1; b <= lower && bad.empty(); ++b)
      if (!s[b].contains(img(ctx.a_index(b)))) bad = "I=" + SupportSet(b).to_string();
    set("a_images_in_s", bad.empty(), bad);
  }
  set("span_is_v", s[lower].dim() == n, s[lower].to_inline());

  {
    std::string bad;
    if (!(g.at(0) && *g.at(0) == frame.Q())) bad = "g1(Q)";
    for (int i = 1; i <= n - 1 && bad.empty(); ++i) {
      const auto pi = p_upper(SupportSet{i}, n);
      const auto& gp = g.at(ctx.p_upper_index(i));
      if (!(gp && *gp == pi)) bad = "g1(P^" + std::to_string(i) + ")";
      else if (f[ctx.a_index(1u << (i - 1))] != ctx.code_target(ctx.a_index(1u << (i - 1)))) bad = "A_" + std::to_string(i);
      for (int j = i + 1; j <= n - 1 && bad.empty(); ++j) {
        const auto v = *ctx.codes().index_of(sum(pi, p_upper(SupportSet{j}, n)));
        if (f[v] != ctx.code_target(v)) bad = "P^" + std::to_string(i) + "+P^" + std::to_string(j);
      }
    }
    set("normalized", bad.empty(), bad);
  }
  {
    std::string bad;
    for (std::uint32_t b = 1; b <= lower && bad.empty(); ++b)
      if (!(s[b] == ctx.s_canonical(b))) bad = "I=" + SupportSet(b).to_string();
    set("s_is_canonical", bad.empty(), bad);
  }
  {
    std::string bad;
    for (std::uint32_t b = 1; b <= lower && bad.empty(); ++b)
      if (f[ctx.a_index(b)] != ctx.code_target(ctx.a_index(b))) bad = "A_" + SupportSet(b).to_string();
    set("a_codes_fixed", bad.empty(), bad);
  }
  {
    std::string bad;
    for (std::size_t i = 1; i < ctx.g1_domain().size() && bad.empty(); ++i) {
      const auto& p = ctx.g1_domain()[i];
      const auto sup = support_of(p);
      if (!(g.at(i) && (*g.at(i) == p || *g.at(i) == p_upper(sup, n)))) bad = "P_" + sup.to_string();
    }
    set("points_fixed_or_dual", bad.empty(), bad);
  }

  // f' maps C_I (codes inside S_I) into S_I, injectively and
  // preserving adjacency, so f'_I embeds Γ_I into Γ_2(S_I).
  std::vector<std::vector<VertexId>> c_sets(lower + 1);
  {
    std::string bad;
    for (std::uint32_t b = 1; b <= lower; ++b)
      for (VertexId v = 0; v < ctx.codes().size(); ++v)
        if (s[b].contains(ctx.codes().vertex(v))) c_sets[b].push_back(v);
    for (std::uint32_t b = 1; b <= lower && bad.empty(); ++b) {
      const auto& c = c_sets[b];
      for (std::size_t x = 0; x < c.size() && bad.empty(); ++x) {
        if (!s[b].contains(img(c[x]))) bad = "I=" + SupportSet(b).to_string() + " X=" + ctx.codes().vertex(c[x]).to_inline();
        for (std::size_t y = x + 1; y < c.size() && bad.empty(); ++y)
          if (f[c[x]] == f[c[y]] || (ctx.codes().adjacent(c[x], c[y]) && !is_adjacent(img(c[x]), img(c[y]))))
            bad = "I=" + SupportSet(b).to_string() + " pair";
      }
    }
    set("restriction_embeds", bad.empty(), bad);
  }

  rep.is_identity = f == ctx.identity_images();
  rep.is_h = f == ctx.h_images();
  {
    for (std::uint32_t b = 1; b <= lower && !rep.local_identity; ++b) {
      if (std::popcount(b) != 3) continue;
      bool id = true;
      for (VertexId v : c_sets[b]) id = id && f[v] == ctx.code_target(v);
      rep.local_identity = id;
    }
    set("local_identity_is_global", !rep.local_identity || rep.is_identity, "identity on a 3-element C_I but not globally");
  }
  {
    // P^n ⊂ H exactly when n is odd; g1(P^n) is P^n for the identity and,
    // for h, P_n when n is even and P^n when n is odd.
    const auto pn_upper = p_upper(SupportSet{n}, n), pn = p_point(SupportSet{n}, n);
    const bool parity_fact = frame.in_h(pn_upper) == (n % 2 == 1);
    const auto& gpn = g.at(ctx.p_upper_index(n));
    bool ok = parity_fact && gpn.has_value();
    if (ok && rep.is_identity) ok = *gpn == pn_upper;
    if (ok && rep.is_h) ok = *gpn == (n % 2 == 0 ? pn : pn_upper);
    set("parity", ok, gpn ? "g1(P^n)=" + gpn->to_inline() : "g1(P^n) undefined");
  }
  set("endgame", rep.is_identity || rep.is_h, "f' is neither identity nor h");
  return rep;
}

// --- classification ---------------------------------------------------------

// Group elements of Aut(Γ_2(V)) indexed by their restriction to the codes and
// by their composition with h. Only for n = 4, where the group is scanned
// directly.
class RestrictionIndex {
 public:
  explicit RestrictionIndex(const TheoremContext& ctx) {
    const GrassmannAutGroup group(ctx.n(), 2, 2);
    elements_ = group.elements();
    for (std::uint32_t i = 0; i < elements_.size(); ++i) {
      const auto& a = elements_[i];
      std::vector<VertexId> r, e;
      for (VertexId v = 0; v < ctx.codes().size(); ++v) {
        r.push_back(*ctx.grassmann().index_of(apply(a, ctx.codes().vertex(v))));
        e.push_back(*ctx.grassmann().index_of(apply(a, ctx.h_subspace(v))));
      }
      restriction_[r].push_back(i);
      exceptional_[e].push_back(i);
    }
  }

  std::size_t group_order() const { return elements_.size(); }
  std::size_t distinct_restrictions() const { return restriction_.size(); }
  std::size_t distinct_exceptional() const { return exceptional_.size(); }
  const GraphAutomorphism& element(std::uint32_t i) const { return elements_[i]; }

  const std::vector<std::uint32_t>* restriction(const std::vector<VertexId>& images) const { return find(restriction_, images); }
  const std::vector<std::uint32_t>* exceptional(const std::vector<VertexId>& images) const { return find(exceptional_, images); }

 private:
  using Table = std::unordered_map<std::vector<VertexId>, std::vector<std::uint32_t>, VertexListHash>;
  static const std::vector<std::uint32_t>* find(const Table& t, const std::vector<VertexId>& k) {
    auto it = t.find(k);
    return it == t.end() ? nullptr : &it->second;
  }
  std::vector<GraphAutomorphism> elements_;
  Table restriction_, exceptional_;
};

// f = a on every code.
inline bool verify_extendable(const TheoremContext& ctx, const std::vector<VertexId>& images, const GraphAutomorphism& a) {
  for (VertexId v = 0; v < ctx.codes().size(); ++v)
    if (!(apply(a, ctx.codes().vertex(v)) == ctx.image(images, v))) return false;
  return true;
}

// f = g ∘ h on every code.
inline bool verify_exceptional(const TheoremContext& ctx, const std::vector<VertexId>& images, const GraphAutomorphism& g) {
  for (VertexId v = 0; v < ctx.codes().size(); ++v)
    if (!(apply(g, h_map(ctx.frame(), ctx.codes().vertex(v))) == ctx.image(images, v))) return false;
  return true;
}

// Verdict from the normalization: f' = id gives f = pre_g^{-1}, f' = h gives
// f = pre_g^{-1} ∘ h. Both are re-verified on every code.
inline Verdict classify_constructive(const TheoremContext& ctx, const std::vector<VertexId>& images, const Normalization& norm) {
  Verdict v;
  if (!norm.ok) return v;
  const auto a = inverse(norm.pre_g);
  if (verify_extendable(ctx, images, a)) {
    v.kind = VerdictKind::Extendable;
    v.witness = a;
  } else if (verify_exceptional(ctx, images, a)) {
    v.kind = VerdictKind::Exceptional;
    v.witness = a;
  }
  return v;
}

// Verdict by direct group scan (n = 4).
inline Verdict classify_by_scan(const RestrictionIndex& index, const std::vector<VertexId>& images) {
  Verdict v;
  if (const auto* hits = index.restriction(images)) {
    v.kind = VerdictKind::Extendable;
    v.witness = index.element(hits->front());
    v.witness_count = hits->size();
  } else if (const auto* hits2 = index.exceptional(images)) {
    v.kind = VerdictKind::Exceptional;
    v.witness = index.element(hits2->front());
    v.witness_count = hits2->size();
  }
  return v;
}

inline Verdict classify(const TheoremContext& ctx, const std::vector<VertexId>& images, const RestrictionIndex* index = nullptr) {
  if (index) return classify_by_scan(*index, images);
  return classify_constructive(ctx, images, normalize(ctx, images));
}

// --- certificate --------------------------------------------------------------

struct LemmaTally {
  std::uint64_t passed = 0, failed = 0, skipped = 0;
};

// Pointwise stabilizers in Aut(Γ_2(V)) of the codes and of h(codes). Trivial
// stabilizers mean distinct automorphisms restrict to distinct embeddings and
// the witness g of f = g∘h is unique.
struct GroupMeasurements {
  std::uint64_t group_order = 0;
  std::uint64_t codes_stabilizer = 0;
  std::uint64_t h_image_stabilizer = 0;
  std::uint64_t h_extensions = 0;  // elements restricting to h
};

inline GroupMeasurements measure_group(const TheoremContext& ctx) {
  GroupMeasurements m;
  const GrassmannAutGroup group(ctx.n(), 2, 2);
  m.group_order = group.order();
  const auto& codes = ctx.codes().vertices();
  group.for_each([&](const GraphAutomorphism& a) {
    bool fix_codes = true, fix_h = true, is_h = true;
    for (std::size_t v = 0; v < codes.size() && (fix_codes || fix_h || is_h); ++v) {
      const auto& hx = ctx.h_subspace(static_cast<VertexId>(v));
      if (fix_codes || is_h) {
        const auto ax = apply(a, codes[v]);
        fix_codes = fix_codes && ax == codes[v];
        is_h = is_h && ax == hx;
      }
      if (fix_h) fix_h = apply(a, hx) == hx;
    }
    m.codes_stabilizer += fix_codes;
    m.h_image_stabilizer += fix_h;
    m.h_extensions += is_h;
    return true;
  });
  return m;
}

struct Certificate {
  int n = 0;
  std::uint64_t embeddings_total = 0, extendable = 0, exceptional = 0, unclassified = 0;
  std::map<std::string, LemmaTally> lemma_chain;
  bool complete = false;
  std::int64_t wall_ms = 0;

  std::string classifier;  // "group-scan" or "constructive"
  // With symmetry_depth > 0 only one prefix per group orbit is searched and
  // every count above is weighted by orbit size.
  std::size_t symmetry_depth = 0;
  std::uint64_t search_prefixes = 0;
  std::uint64_t leaves_searched = 0;
  std::uint64_t soundness_failures = 0;
  std::uint64_t witness_failures = 0;
  std::uint64_t classifier_disagreements = 0;
  std::uint64_t dual_corrections = 0;
  std::uint64_t normalized_identity = 0, normalized_h = 0;
  std::uint64_t local_identity_held = 0;
  std::uint64_t max_witness_multiplicity = 0;  // group scan only
  GroupMeasurements group;

  bool holds() const {
    return unclassified == 0 && soundness_failures == 0 && witness_failures == 0 && classifier_disagreements == 0 &&
           extendable + exceptional == embeddings_total;
  }
  bool lemma_chain_clean() const {
    for (const auto& [name, t] : lemma_chain)
      if (t.failed || t.skipped) return false;
    return true;
  }
};

namespace detail {

struct CertificateAccumulator {
  std::uint64_t leaves = 0;
  std::uint64_t total = 0, extendable = 0, exceptional = 0, unclassified = 0;
  std::uint64_t soundness_failures = 0, witness_failures = 0, disagreements = 0, dual = 0, ident = 0, hh = 0, l5 = 0;
  std::uint64_t max_mult = 0;
  std::map<std::string, LemmaTally> lemmas;

  void merge(const CertificateAccumulator& o) {
    leaves += o.leaves;
    total += o.total;
    extendable += o.extendable;
    exceptional += o.exceptional;
    unclassified += o.unclassified;
    soundness_failures += o.soundness_failures;
    witness_failures += o.witness_failures;
    disagreements += o.disagreements;
    dual += o.dual;
    ident += o.ident;
    hh += o.hh;
    l5 += o.l5;
    max_mult = std::max(max_mult, o.max_mult);
    for (const auto& [k, t] : o.lemmas) {
      auto& d = lemmas[k];
      d.passed += t.passed;
      d.failed += t.failed;
      d.skipped += t.skipped;
    }
  }
};

}  // namespace detail

struct CertifyOptions {
  EnumerationOptions enumeration;
  // Per-embedding verdicts are passed here (from worker threads) when set.
  std::function<void(const EmbeddingMap&)> on_embedding;
};

inline Certificate certify_theorem(int n, const CertifyOptions& opts = {}) {
  if (n != 4 && n != 5) throw OutOfRange("certify_theorem supports n = 4 and n = 5");
  const auto start = std::chrono::steady_clock::now();
  const TheoremContext ctx(n);
  std::optional<RestrictionIndex> index;
  if (n == 4) index.emplace(ctx);
  std::mutex sink_mu;

  using Acc = detail::CertificateAccumulator;
  auto fold = [&](Acc& acc, const std::vector<VertexId>& images, std::uint64_t w) {
    acc.total += w;
    ++acc.leaves;
    if (!embedding_is_valid(ctx, images)) acc.soundness_failures += w;
    const auto norm = normalize(ctx, images);
    const auto rep = lemma_chain(ctx, norm);
    for (const auto& r : rep.results) {
      auto& t = acc.lemmas[r.name];
      (r.status == LemmaStatus::Passed ? t.passed : r.status == LemmaStatus::Failed ? t.failed : t.skipped) += w;
    }
    acc.dual += w * norm.dual_correction;
    acc.ident += w * rep.is_identity;
    acc.hh += w * rep.is_h;
    acc.l5 += w * rep.local_identity;
    const Verdict constructive = classify_constructive(ctx, images, norm);
    Verdict v = index ? classify_by_scan(*index, images) : constructive;
    if (index && v.kind != constructive.kind) acc.disagreements += w;
    acc.max_mult = std::max<std::uint64_t>(acc.max_mult, v.witness_count);
    switch (v.kind) {
      case VerdictKind::Extendable:
        acc.extendable += w;
        if (!verify_extendable(ctx, images, *v.witness)) acc.witness_failures += w;
        break;
      case VerdictKind::Exceptional:
        acc.exceptional += w;
        if (!verify_exceptional(ctx, images, *v.witness)) acc.witness_failures += w;
        break;
      case VerdictKind::Unclassified: acc.unclassified += w; break;
    }
    if (opts.on_embedding) {
      std::lock_guard lock(sink_mu);
      opts.on_embedding(EmbeddingMap{n, images, v});
    }
  };

  bool complete = false;
  std::vector<SearchPrefix> prefixes;
  const auto parts = search_embeddings<Acc>(ctx, opts.enumeration, fold, complete, &prefixes);
  Acc total;
  for (const auto& p : parts) total.merge(p);
  for (const auto& name : lemma_names()) total.lemmas[name];

  Certificate c;
  c.n = n;
  c.embeddings_total = total.total;
  c.extendable = total.extendable;
  c.exceptional = total.exceptional;
  c.unclassified = total.unclassified;
  c.lemma_chain = total.lemmas;
  c.complete = complete;
  c.classifier = index ? "group-scan" : "constructive";
  c.symmetry_depth = opts.enumeration.symmetry_depth;
  c.search_prefixes = prefixes.size();
  c.leaves_searched = total.leaves;
  c.soundness_failures = total.soundness_failures;
  c.witness_failures = total.witness_failures;
  c.classifier_disagreements = total.disagreements;
  c.dual_corrections = total.dual;
  c.normalized_identity = total.ident;
  c.normalized_h = total.hh;
  c.local_identity_held = total.l5;
  c.max_witness_multiplicity = total.max_mult;
  c.group = measure_group(ctx);
  c.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return c;
}

}  // namespace codegraph
