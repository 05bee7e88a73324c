#pragma once

// Automorphisms of Grassmann graphs induced by linear maps of V, optionally
// composed with the orthocomplement map (only when n = 2k), and the
// monomial automorphisms of the code graphs.
//
// Vectors are rows and a matrix acts on the right: l(x) = x M, so row i of M
// is the image of e_i.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "codegraph/fqlinalg.hpp"
#include "codegraph/grassmann.hpp"

namespace codegraph {

class Matrix {
 public:
  Matrix() = default;
  Matrix(FieldSpec field, int n) : field_(field), n_(n) {
    if (n < 1 || n > field.max_dim()) throw OutOfRange("matrix size outside supported range");
  }

  static Matrix identity(FieldSpec field, int n) {
    Matrix m(field, n);
    for (int i = 0; i < n; ++i) m.rows_[static_cast<std::size_t>(i)] = field.with_digit(0, n, i, 1);
    return m;
  }

  static Matrix from_rows(FieldSpec field, std::span<const Word> rows) {
    Matrix m(field, static_cast<int>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) m.rows_[i] = rows[i];
    return m;
  }

  // Permutation matrix sending e_i to e_{perm[i]} (0-based).
  static Matrix permutation(FieldSpec field, std::span<const int> perm) {
    const int n = static_cast<int>(perm.size());
    Matrix m(field, n);
    for (int i = 0; i < n; ++i) m.rows_[static_cast<std::size_t>(i)] = field.with_digit(0, n, perm[static_cast<std::size_t>(i)], 1);
    return m;
  }

  const FieldSpec& field() const { return field_; }
  int n() const { return n_; }
  Word row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
  std::span<const Word> rows() const { return {rows_.data(), static_cast<std::size_t>(n_)}; }
  int at(int i, int j) const { return field_.digit(rows_[static_cast<std::size_t>(i)], n_, j); }
  void set_row(int i, Word r) { rows_[static_cast<std::size_t>(i)] = r; }
  void set(int i, int j, int v) { rows_[static_cast<std::size_t>(i)] = field_.with_digit(rows_[static_cast<std::size_t>(i)], n_, j, v); }

  // x M
  Word apply(Word x) const {
    Word out = 0;
    if (field_.binary()) {
      for (int i = 0; i < n_; ++i)
        if ((x >> (n_ - 1 - i)) & 1u) out ^= rows_[static_cast<std::size_t>(i)];
      return out;
    }
    for (int i = 0; i < n_; ++i) {
      const int c = field_.digit(x, n_, i);
      if (c) out = field_.add(out, field_.scale(rows_[static_cast<std::size_t>(i)], c));
    }
    return out;
  }

  // (this * other): first this, then other, under the row-vector convention.
  Matrix operator*(const Matrix& other) const {
    Matrix m(field_, n_);
    for (int i = 0; i < n_; ++i) m.rows_[static_cast<std::size_t>(i)] = other.apply(rows_[static_cast<std::size_t>(i)]);
    return m;
  }

  Matrix transpose() const {
    Matrix m(field_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m.set(j, i, at(i, j));
    return m;
  }

  bool invertible() const { return Subspace::span(field_, n_, rows()).dim() == n_; }

  // Gauss–Jordan on [M | I].
  Matrix inverse() const {
    std::vector<Word> a(rows_.begin(), rows_.begin() + n_);
    Matrix inv = identity(field_, n_);
    for (int col = 0; col < n_; ++col) {
      int piv = -1;
      for (int r = col; r < n_; ++r)
        if (field_.digit(a[static_cast<std::size_t>(r)], n_, col)) {
          piv = r;
          break;
        }
      if (piv < 0) throw Error("matrix is singular");
      std::swap(a[static_cast<std::size_t>(piv)], a[static_cast<std::size_t>(col)]);
      std::swap(inv.rows_[static_cast<std::size_t>(piv)], inv.rows_[static_cast<std::size_t>(col)]);
      const int s = field_.inv(field_.digit(a[static_cast<std::size_t>(col)], n_, col));
      a[static_cast<std::size_t>(col)] = field_.scale(a[static_cast<std::size_t>(col)], s);
      inv.rows_[static_cast<std::size_t>(col)] = field_.scale(inv.rows_[static_cast<std::size_t>(col)], s);
      for (int r = 0; r < n_; ++r) {
        if (r == col) continue;
        const int c = field_.digit(a[static_cast<std::size_t>(r)], n_, col);
        if (!c) continue;
        a[static_cast<std::size_t>(r)] = field_.sub_scaled(a[static_cast<std::size_t>(r)], a[static_cast<std::size_t>(col)], c);
        inv.rows_[static_cast<std::size_t>(r)] = field_.sub_scaled(inv.rows_[static_cast<std::size_t>(r)], inv.rows_[static_cast<std::size_t>(col)], c);
      }
    }
    return inv;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.n_ == b.n_ && std::equal(a.rows_.begin(), a.rows_.begin() + a.n_, b.rows_.begin());
  }

 private:
  FieldSpec field_{2};
  int n_ = 0;
  std::array<Word, kMaxDim> rows_{};
};

// X -> (X M), then X -> X^⊥ when `dual` is set.
struct GraphAutomorphism {
  Matrix matrix;
  bool dual = false;

  static GraphAutomorphism identity(FieldSpec field, int n) { return {Matrix::identity(field, n), false}; }
};

inline Subspace apply_linear(const Matrix& m, const Subspace& x) {
  x.check_same(m.n(), m.field());
  Subspace out(x.field(), x.n());
  for (Word r : x.rows()) out.insert(m.apply(r));
  return out;
}

inline Subspace apply(const GraphAutomorphism& a, const Subspace& x) {
  if (a.dual && 2 * x.dim() != x.n()) throw DimensionMismatch("orthocomplement is an automorphism only when n = 2k");
  Subspace y = apply_linear(a.matrix, x);
  return a.dual ? orthocomplement(y) : y;
}

// (a ∘ b)(X) = a(b(X)). Uses (X^⊥) M = (X M^{-T})^⊥.
inline GraphAutomorphism compose(const GraphAutomorphism& a, const GraphAutomorphism& b) {
  const Matrix right = b.dual ? a.matrix.inverse().transpose() : a.matrix;
  return {b.matrix * right, a.dual != b.dual};
}

inline GraphAutomorphism inverse(const GraphAutomorphism& a) {
  if (a.dual) return {a.matrix.transpose(), true};
  return {a.matrix.inverse(), false};
}

// Equality of actions on a list of vertices.
inline bool acts_equal(const GraphAutomorphism& a, const GraphAutomorphism& b, std::span<const Subspace> on) {
  for (const auto& x : on)
    if (!(apply(a, x) == apply(b, x))) return false;
  return true;
}

// Matrix rows as digit strings, then a line holding the dual bit.
inline std::string serialize(const GraphAutomorphism& a) {
  std::string s;
  for (int i = 0; i < a.matrix.n(); ++i) s += FVector{a.matrix.field(), a.matrix.n(), a.matrix.row(i)}.to_string() + "\n";
  s += a.dual ? "1\n" : "0\n";
  return s;
}

inline GraphAutomorphism parse_automorphism(std::string_view text, FieldSpec field = FieldSpec(2)) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) lines.push_back(line);
  if (lines.size() < 2) throw Error("automorphism text needs matrix rows and a dual bit");
  const std::string flag = lines.back();
  lines.pop_back();
  if (flag != "0" && flag != "1") throw Error("dual bit must be 0 or 1");
  std::vector<Word> rows;
  for (const auto& l : lines) {
    auto v = FVector::parse(l, field);
    if (v.n != static_cast<int>(lines.size())) throw DimensionMismatch("automorphism matrix must be square");
    rows.push_back(v.packed);
  }
  GraphAutomorphism a{Matrix::from_rows(field, rows), flag == "1"};
  if (!a.matrix.invertible()) throw Error("automorphism matrix is singular");
  return a;
}

namespace detail {

inline std::uint64_t gl_order(int n, int q) {
  std::uint64_t qn = 1;
  for (int i = 0; i < n; ++i) qn *= static_cast<std::uint64_t>(q);
  std::uint64_t order = 1, qi = 1;
  for (int i = 0; i < n; ++i) {
    order *= qn - qi;
    qi *= static_cast<std::uint64_t>(q);
  }
  return order;
}

}  // namespace detail

// Automorphisms of Γ_k(V) induced by GL(n,q) modulo scalars, doubled by the
// orthocomplement map when n = 2k.
class GrassmannAutGroup {
 public:
  GrassmannAutGroup(int n, int k, int q) : field_(q), n_(n), k_(k) {
    if (n < 2 || n > field_.max_dim() || k < 1 || k > n - 1) throw OutOfRange("group parameters outside supported range");
    if (detail::gl_order(n, q) / static_cast<std::uint64_t>(q - 1) > 200'000'000) throw OutOfRange("group too large to iterate");
  }

  int n() const { return n_; }
  int k() const { return k_; }
  bool has_dual() const { return 2 * k_ == n_; }

  std::uint64_t order() const {
    return detail::gl_order(n_, field_.q()) / static_cast<std::uint64_t>(field_.q() - 1) * (has_dual() ? 2 : 1);
  }

  // Visits every element once. Elements are split into `parts` disjoint
  // slices by the first matrix row; `part` selects one. Return false from the
  // visitor to stop.
  bool for_each(const std::function<bool(const GraphAutomorphism&)>& visit, std::size_t part = 0, std::size_t parts = 1) const {
    const auto firsts = first_rows();
    Matrix m(field_, n_);
    for (std::size_t i = part; i < firsts.size(); i += parts) {
      m.set_row(0, firsts[i]);
      Subspace span(field_, n_);
      span.insert(firsts[i]);
      if (!fill(m, span, 1, visit)) return false;
    }
    return true;
  }

  // All elements; only for small groups.
  std::vector<GraphAutomorphism> elements() const {
    if (order() > 100'000) throw OutOfRange("group too large to materialize; iterate instead");
    std::vector<GraphAutomorphism> out;
    for_each([&](const GraphAutomorphism& a) {
      out.push_back(a);
      return true;
    });
    return out;
  }

 private:
  // Non-zero vectors with first non-zero digit 1 (one per scalar class).
  std::vector<Word> first_rows() const {
    std::vector<Word> out;
    for (const auto& p : enumerate_subspaces(n_, 1, field_.q())) out.push_back(p.rows()[0]);
    return out;
  }

  bool fill(Matrix& m, const Subspace& span, int row, const std::function<bool(const GraphAutomorphism&)>& visit) const {
    if (row == n_) {
      if (!visit(GraphAutomorphism{m, false})) return false;
      if (has_dual() && !visit(GraphAutomorphism{m, true})) return false;
      return true;
    }
    const Word limit = Word{1} << (n_ * field_.digit_bits());
    for (Word v = 1; v < limit; ++v) {
      if (!field_.binary() && !valid_digits(v)) continue;
      if (span.contains(v)) continue;
      m.set_row(row, v);
      Subspace next = span;
      next.insert(v);
      if (!fill(m, next, row + 1, visit)) return false;
    }
    return true;
  }

  bool valid_digits(Word v) const {
    for (int i = 0; i < n_; ++i)
      if (field_.digit(v, n_, i) >= field_.q()) return false;
    return true;
  }

  FieldSpec field_;
  int n_, k_;
};

// Automorphisms of Γ(n,k)_q induced by monomial matrices (a permutation
// times a diagonal), modulo scalars.
class CodeGraphAutGroup {
 public:
  CodeGraphAutGroup(int n, int k, int q) : field_(q), n_(n), k_(k) {
    if (n > field_.max_dim() || k <= 1 || k >= n - 1) throw OutOfRange("code graph group needs 1 < k < n-1");
    if (n > 9) throw OutOfRange("group too large to iterate");
  }

  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (int i = 2; i <= n_; ++i) o *= static_cast<std::uint64_t>(i);
    for (int i = 1; i < n_; ++i) o *= static_cast<std::uint64_t>(field_.q() - 1);
    return o;
  }

  bool for_each(const std::function<bool(const GraphAutomorphism&)>& visit) const {
    std::vector<int> perm(static_cast<std::size_t>(n_));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      // Diagonal entries d_0 = 1, d_1..d_{n-1} in F_q^*.
      std::vector<int> diag(static_cast<std::size_t>(n_), 1);
      while (true) {
        Matrix m(field_, n_);
        for (int i = 0; i < n_; ++i) m.set(i, perm[static_cast<std::size_t>(i)], diag[static_cast<std::size_t>(i)]);
        if (!visit(GraphAutomorphism{m, false})) return false;
        int i = 1;
        while (i < n_ && ++diag[static_cast<std::size_t>(i)] == field_.q()) diag[static_cast<std::size_t>(i++)] = 1;
        if (i >= n_) break;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return true;
  }

 private:
  FieldSpec field_;
  int n_, k_;
};

// The vertex permutation of g induced by a, or nullopt if some image leaves
// the vertex set.
inline std::optional<std::vector<VertexId>> vertex_action(const GraphAutomorphism& a, const CodeGraph& g) {
  std::vector<VertexId> out;
  out.reserve(g.size());
  for (const auto& x : g.vertices()) {
    const auto id = g.index_of(apply(a, x));
    if (!id) return std::nullopt;
    out.push_back(*id);
  }
  return out;
}

inline bool preserves_adjacency(const std::vector<VertexId>& perm, const CodeGraph& g) {
  for (VertexId a = 0; a < g.size(); ++a)
    for (VertexId b = a + 1; b < g.size(); ++b)
      if (g.adjacent(a, b) != g.adjacent(perm[a], perm[b])) return false;
  return true;
}

}  // namespace codegraph
