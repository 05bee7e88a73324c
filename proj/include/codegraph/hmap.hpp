#pragma once

// The exceptional map h on non-degenerate [n,2]_2 codes.
//
// Over F_2 every point of V is spanned by a single 0/1 vector, so a point is
// named by its support I ⊆ {1..n}: P_I. P^I is P_{I^c}. Q is the all-ones
// point and H is the hyperplane spanned by P^1, ..., P^{n-1}. Codes are split
// into A (containing Q), B (inside H) and C (the rest). h fixes A ∪ B and
// sends X ∈ C with outside-H points P_I, P_J to X^c = P^I + P^J.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "codegraph/fqlinalg.hpp"
#include "codegraph/grassmann.hpp"

namespace codegraph {

// A subset of {1..n}; bit i-1 holds coordinate i.
class SupportSet {
 public:
  constexpr SupportSet() = default;
  constexpr explicit SupportSet(std::uint32_t bits) : bits_(bits) {}
  SupportSet(std::initializer_list<int> members) {
    for (int i : members) bits_ |= std::uint32_t{1} << (i - 1);
  }

  static constexpr SupportSet full(int n) { return SupportSet((std::uint32_t{1} << n) - 1); }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool contains(int i) const { return (bits_ >> (i - 1)) & 1u; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr SupportSet complement(int n) const { return SupportSet(full(n).bits_ & ~bits_); }
  constexpr SupportSet operator&(SupportSet o) const { return SupportSet(bits_ & o.bits_); }
  constexpr SupportSet operator|(SupportSet o) const { return SupportSet(bits_ | o.bits_); }
  constexpr bool is_subset_of(SupportSet o) const { return (bits_ & ~o.bits_) == 0; }

  std::vector<int> members() const {
    std::vector<int> out;
    for (int i = 1; i <= 32; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int i : members()) {
      if (!first) s += ",";
      s += std::to_string(i);
      first = false;
    }
    return s + "}";
  }

  friend constexpr auto operator<=>(SupportSet, SupportSet) = default;

 private:
  std::uint32_t bits_ = 0;
};

// The vector with support I in F_2^n.
inline Word support_vector(SupportSet set, int n) {
  const FieldSpec f(2);
  Word w = 0;
  for (int i = 1; i <= n; ++i)
    if (set.contains(i)) w = f.with_digit(w, n, i - 1, 1);
  return w;
}

inline SupportSet support_of(Word v, int n) {
  const FieldSpec f(2);
  std::uint32_t bits = 0;
  for (int i = 1; i <= n; ++i)
    if (f.digit(v, n, i - 1)) bits |= std::uint32_t{1} << (i - 1);
  return SupportSet(bits);
}

// P_I for a proper non-empty I.
inline Subspace p_point(SupportSet set, int n) {
  if (set.empty() || set == SupportSet::full(n)) throw OutOfRange("P_I needs a proper non-empty support");
  if (!set.is_subset_of(SupportSet::full(n))) throw OutOfRange("support outside {1..n}");
  return Subspace::span(FieldSpec(2), n, std::vector<Word>{support_vector(set, n)});
}

// P^I = P_{I^c}.
inline Subspace p_upper(SupportSet set, int n) { return p_point(set.complement(n), n); }

// Support of a 1-dimensional subspace over F_2.
inline SupportSet support_of(const Subspace& point) {
  if (point.dim() != 1 || !point.field().binary()) throw DimensionMismatch("support needs a point of PG(n-1,2)");
  return support_of(point.rows()[0], point.n());
}

enum class AbcPart { A, B, C };

inline const char* to_string(AbcPart p) {
  switch (p) {
    case AbcPart::A: return "A";
    case AbcPart::B: return "B";
    default: return "C";
  }
}

class SpecialFrame {
 public:
  explicit SpecialFrame(int n) : n_(n), q_(FieldSpec(2), n), h_(FieldSpec(2), n) {
    if (n < 3 || n > FieldSpec(2).max_dim()) throw OutOfRange("frame dimension outside supported range");
    q_ = Subspace::span(FieldSpec(2), n, std::vector<Word>{support_vector(SupportSet::full(n), n)});
    for (int i = 1; i <= n - 1; ++i) h_.insert(p_upper(SupportSet{i}, n).rows()[0]);
  }

  int n() const { return n_; }
  const Subspace& Q() const { return q_; }
  const Subspace& H() const { return h_; }

  bool in_h(const Subspace& x) const { return h_.contains(x); }
  bool in_h(SupportSet set) const { return h_.contains(support_vector(set, n_)); }

  // Q ⊄ H and exactly one of P_I, P^I in H for every proper non-empty I.
  bool invariants_hold() const {
    if (h_.dim() != n_ - 1 || h_.contains(q_)) return false;
    const auto all = SupportSet::full(n_);
    for (std::uint32_t b = 1; b < all.bits(); ++b) {
      const SupportSet s(b);
      if (in_h(s) == in_h(s.complement(n_))) return false;
    }
    return true;
  }

  // A_I = Q + P_I.
  Subspace a_code(SupportSet set) const { return sum(q_, p_point(set, n_)); }

  void require_code(const Subspace& x) const {
    if (x.n() != n_ || !x.field().binary() || x.dim() != 2) throw DimensionMismatch("expected a 2-dimensional subspace of F_2^n");
  }

  // Q ⊂ X -> A, X ⊂ H -> B, otherwise C.
  AbcPart part_by_containment(const Subspace& x) const {
    require_code(x);
    if (x.contains(q_)) return AbcPart::A;
    if (h_.contains(x)) return AbcPart::B;
    return AbcPart::C;
  }

  // The same decision from the supports of X's three points. Returns nullopt
  // when the supports fit none of the three shapes (which cannot happen for
  // a non-degenerate code).
  std::optional<AbcPart> part_by_lines(const Subspace& x) const {
    require_code(x);
    const Word a = x.rows()[0], b = x.rows()[1];
    const SupportSet pts[3] = {support_of(a, n_), support_of(b, n_), support_of(a ^ b, n_)};
    const auto all = SupportSet::full(n_);
    std::vector<SupportSet> outside;
    for (auto s : pts) {
      if (s == all) return AbcPart::A;
      if (!in_h(s)) outside.push_back(s);
    }
    if (outside.empty()) return AbcPart::B;
    if (outside.size() != 2) return std::nullopt;
    const auto i = outside[0], j = outside[1];
    if ((i | j) == all && !(i & j).empty()) return AbcPart::C;
    return std::nullopt;
  }

  AbcPart part(const Subspace& x) const {
    const AbcPart by_set = part_by_containment(x);
    const auto by_lines = part_by_lines(x);
    if (is_nondegenerate(x) && (!by_lines || *by_lines != by_set))
      throw Error("A/B/C decision disagrees between containment and line decomposition for " + x.to_inline());
    return by_set;
  }

  // The two points of X ∈ C outside H, as supports (I, J) with I < J.
  std::pair<SupportSet, SupportSet> outside_points(const Subspace& x) const {
    require_code(x);
    const Word a = x.rows()[0], b = x.rows()[1];
    std::vector<SupportSet> outside;
    for (Word v : {a, b, a ^ b})
      if (!h_.contains(v)) outside.push_back(support_of(v, n_));
    if (outside.size() != 2) throw Error("code does not meet H in a single point");
    std::sort(outside.begin(), outside.end());
    return {outside[0], outside[1]};
  }

 private:
  int n_;
  Subspace q_;
  Subspace h_;
};

struct AbcPartition {
  std::vector<VertexId> A, B, C;
};

inline void require_binary_pair_graph(const CodeGraph& g) {
  if (g.kind() != GraphKind::NonDegenerate || g.k() != 2 || g.q() != 2)
    throw OutOfRange("expected the graph of non-degenerate [n,2]_2 codes");
}

inline AbcPartition abc_partition(const CodeGraph& g) {
  require_binary_pair_graph(g);
  const SpecialFrame frame(g.n());
  AbcPartition out;
  for (VertexId v = 0; v < g.size(); ++v) {
    switch (frame.part(g.vertex(v))) {
      case AbcPart::A: out.A.push_back(v); break;
      case AbcPart::B: out.B.push_back(v); break;
      case AbcPart::C: out.C.push_back(v); break;
    }
  }
  return out;
}

// X^c = P^I + P^J for X ∈ C with outside-H points P_I, P_J.
inline Subspace complement_code(const SpecialFrame& frame, const Subspace& x) {
  if (!is_nondegenerate(x) || frame.part(x) != AbcPart::C) throw Error("complement_code needs a code in C");
  const int n = frame.n();
  const auto [i, j] = frame.outside_points(x);
  const Subspace xc = sum(p_upper(i, n), p_upper(j, n));
  if (!frame.H().contains(xc) || is_nondegenerate(xc) || !(intersect(x, xc) == p_upper(i & j, n)))
    throw Error("complement postcondition failed for " + x.to_inline());
  return xc;
}

inline Subspace h_map(const SpecialFrame& frame, const Subspace& x) {
  frame.require_code(x);
  if (!is_nondegenerate(x)) throw Error("h is defined on non-degenerate codes only");
  return frame.part(x) == AbcPart::C ? complement_code(frame, x) : x;
}

inline Subspace h_map(const Subspace& x) { return h_map(SpecialFrame(x.n()), x); }

// Point map of PG(n-1,2): fixes Q and every P_I ⊂ H, sends P_I ⊄ H to P^I.
inline Subspace projective_morphism(const SpecialFrame& frame, const Subspace& point) {
  const SupportSet s = support_of(point);
  if (s == SupportSet::full(frame.n()) || frame.in_h(s)) return point;
  return p_upper(s, frame.n());
}

// h as a vertex map into a target graph that contains all images.
inline std::vector<VertexId> h_images(const CodeGraph& codes, const CodeGraph& target) {
  const SpecialFrame frame(codes.n());
  std::vector<VertexId> out;
  for (const auto& x : codes.vertices()) {
    const auto id = target.index_of(h_map(frame, x));
    if (!id) throw Error("h image missing from target graph");
    out.push_back(*id);
  }
  return out;
}

struct HCheck {
  std::string name;
  bool passed = false;
  std::vector<Subspace> witnesses;  // empty when the claim has none
};

struct HReport {
  int n = 0;
  std::size_t codes = 0;
  std::size_t a = 0, b = 0, c = 0;
  std::vector<HCheck> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const HCheck& c) { return c.passed; });
  }
};

// Checks the five structural claims about h on a given code graph; the
// graph's adjacency is taken as given so that a corrupted graph is caught.
inline HReport verify_h(const CodeGraph& g) {
  require_binary_pair_graph(g);
  const int n = g.n();
  const SpecialFrame frame(n);
  HReport rep;
  rep.n = n;
  rep.codes = g.size();
  const auto part = abc_partition(g);
  rep.a = part.A.size();
  rep.b = part.B.size();
  rep.c = part.C.size();

  std::vector<Subspace> img;
  img.reserve(g.size());
  for (const auto& x : g.vertices()) img.push_back(h_map(frame, x));

  {
    HCheck c{"injective", true, {}};
    std::vector<std::pair<Subspace, VertexId>> sorted;
    for (VertexId v = 0; v < g.size(); ++v) sorted.emplace_back(img[v], v);
    std::sort(sorted.begin(), sorted.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
      if (sorted[i].first == sorted[i - 1].first) {
        c.passed = false;
        c.witnesses = {g.vertex(sorted[i - 1].second), g.vertex(sorted[i].second)};
        break;
      }
    rep.checks.push_back(std::move(c));
  }
  {
    HCheck c{"preserves_adjacency", true, {}};
    for (VertexId a = 0; a < g.size() && c.passed; ++a)
      g.neighbors(a).for_each([&](std::size_t b) {
        if (c.passed && !is_adjacent(img[a], img[b])) {
          c.passed = false;
          c.witnesses = {g.vertex(a), g.vertex(static_cast<VertexId>(b))};
        }
      });
    rep.checks.push_back(std::move(c));
  }
  {
    // Witness: the first non-adjacent pair (by vertex ID) with adjacent images.
    HCheck c{"one_direction_only", false, {}};
    for (VertexId a = 0; a < g.size() && !c.passed; ++a)
      for (VertexId b = a + 1; b < g.size(); ++b)
        if (!g.adjacent(a, b) && is_adjacent(img[a], img[b])) {
          c.passed = true;
          c.witnesses = {g.vertex(a), g.vertex(b), img[a], img[b]};
          break;
        }
    rep.checks.push_back(std::move(c));
  }
  {
    HCheck c{"c_images_degenerate", !part.C.empty(), {}};
    for (VertexId v : part.C)
      if (is_nondegenerate(img[v])) {
        c.passed = false;
        c.witnesses = {g.vertex(v)};
        break;
      }
    rep.checks.push_back(std::move(c));
  }
  {
    // Lines go into lines; some two points share an image.
    HCheck c{"degenerate_morphism", true, {}};
    for (const auto& line : enumerate_subspaces(n, 2, 2)) {
      Subspace images(FieldSpec(2), n);
      for (const auto& p : points_of(line)) images.insert(projective_morphism(frame, p).rows()[0]);
      if (images.dim() > 2) {
        c.passed = false;
        c.witnesses = {line};
        break;
      }
    }
    bool collision = false;
    if (c.passed) {
      for (std::uint32_t bits = 1; bits < SupportSet::full(n).bits() && !collision; ++bits) {
        const SupportSet s(bits);
        if (frame.in_h(s)) continue;
        const auto pi = p_point(s, n), up = p_upper(s, n);
        if (projective_morphism(frame, pi) == up && projective_morphism(frame, up) == up) {
          collision = true;
          c.witnesses = {pi, up};
        }
      }
      c.passed = collision;
    }
    rep.checks.push_back(std::move(c));
  }
  return rep;
}

inline HReport verify_h(int n) {
  if (n < 4) throw OutOfRange("verify_h needs n >= 4");
  return verify_h(build_graph(n, 2, 2, GraphKind::NonDegenerate));
}

}  // namespace codegraph
