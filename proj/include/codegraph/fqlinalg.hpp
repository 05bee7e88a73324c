#pragma once

// Linear algebra over a small prime field F_q.
//
// Vectors of F_q^n are packed into one 64-bit word. Over F_2 every
// coordinate takes one bit and row operations are XOR; for odd q every
// coordinate takes a 4-bit digit. Coordinate 0 occupies the most significant
// digit, so numeric order of packed words is lexicographic order of the
// digit strings ("0111" < "1000").

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace codegraph {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

using Word = std::uint64_t;

inline constexpr int kMaxDim = 16;

// Largest Grassmannian that enumerate_subspaces will materialize.
inline constexpr std::uint64_t kMaxEnumeration = 1'000'000;

class FieldSpec {
 public:
  explicit FieldSpec(int q = 2) : q_(q) {
    if (q < 2) throw OutOfRange("field order must be >= 2");
    for (int d = 2; d * d <= q; ++d)
      if (q % d == 0) throw OutOfRange("field order " + std::to_string(q) + " is not prime");
    // Digits are 4 bits wide for odd q.
    if (q > 13) throw OutOfRange("field order " + std::to_string(q) + " exceeds supported range");
    inv_.fill(0);
    for (int a = 1; a < q; ++a)
      for (int b = 1; b < q; ++b)
        if (a * b % q == 1) inv_[static_cast<std::size_t>(a)] = static_cast<std::uint8_t>(b);
  }

  int q() const { return q_; }
  bool binary() const { return q_ == 2; }
  int digit_bits() const { return q_ == 2 ? 1 : 4; }

  // Desk-scale bound on the ambient dimension.
  int max_dim() const { return q_ == 2 ? 16 : 8; }

  int inv(int c) const { return inv_[static_cast<std::size_t>(c)]; }
  int neg(int c) const { return c == 0 ? 0 : q_ - c; }

  Word add(Word a, Word b) const {
    if (binary()) return a ^ b;
    Word out = 0;
    for (int s = 0; s < 64; s += 4) {
      Word d = ((a >> s) & 0xF) + ((b >> s) & 0xF);
      if (d >= static_cast<Word>(q_)) d -= static_cast<Word>(q_);
      out |= d << s;
    }
    return out;
  }

  Word scale(Word a, int c) const {
    c %= q_;
    if (c < 0) c += q_;
    if (binary()) return c ? a : 0;
    if (c == 0) return 0;
    if (c == 1) return a;
    Word out = 0;
    for (int s = 0; s < 64; s += 4) {
      Word d = ((a >> s) & 0xF) * static_cast<Word>(c) % static_cast<Word>(q_);
      out |= d << s;
    }
    return out;
  }

  // a - c*b
  Word sub_scaled(Word a, Word b, int c) const {
    if (binary()) return (c & 1) ? a ^ b : a;
    return add(a, scale(b, neg(c % q_)));
  }

  int digit(Word w, int n, int i) const {
    const int shift = (n - 1 - i) * digit_bits();
    return static_cast<int>((w >> shift) & (binary() ? 1u : 0xFu));
  }

  Word with_digit(Word w, int n, int i, int d) const {
    const int shift = (n - 1 - i) * digit_bits();
    const Word mask = (binary() ? Word{1} : Word{0xF}) << shift;
    return (w & ~mask) | (static_cast<Word>(d) << shift);
  }

  // Index of the first nonzero coordinate, or n for the zero vector.
  int leading(Word w, int n) const {
    if (w == 0) return n;
    const int width = std::bit_width(w);
    return n - (width + digit_bits() - 1) / digit_bits();
  }

  // All-ones pattern covering n coordinates (as digits equal to 1).
  Word ones(int n) const {
    Word out = 0;
    for (int i = 0; i < n; ++i) out = with_digit(out, n, i, 1);
    return out;
  }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) { return a.q_ == b.q_; }

 private:
  int q_;
  std::array<std::uint8_t, 16> inv_{};
};

// A vector of F_q^n.
struct FVector {
  FieldSpec field;
  int n = 0;
  Word packed = 0;

  int operator[](int i) const { return field.digit(packed, n, i); }
  bool is_zero() const { return packed == 0; }

  static FVector from_digits(FieldSpec field, std::span<const int> digits) {
    const int n = static_cast<int>(digits.size());
    if (n < 1 || n > field.max_dim()) throw OutOfRange("vector length out of range");
    Word w = 0;
    for (int i = 0; i < n; ++i) {
      if (digits[static_cast<std::size_t>(i)] < 0 || digits[static_cast<std::size_t>(i)] >= field.q())
        throw OutOfRange("coordinate outside [0, q)");
      w = field.with_digit(w, n, i, digits[static_cast<std::size_t>(i)]);
    }
    return FVector{field, n, w};
  }

  static FVector parse(std::string_view text, FieldSpec field = FieldSpec(2)) {
    std::vector<int> digits;
    for (char c : text) {
      if (c < '0' || c > '9') throw Error("invalid digit in vector text");
      digits.push_back(c - '0');
    }
    return from_digits(field, digits);
  }

  std::string to_string() const {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = static_cast<char>('0' + (*this)[i]);
    return s;
  }

  friend bool operator==(const FVector& a, const FVector& b) {
    return a.field == b.field && a.n == b.n && a.packed == b.packed;
  }
};

// e_i with 1-based i.
inline FVector unit_vector(FieldSpec field, int n, int i) {
  if (i < 1 || i > n) throw OutOfRange("coordinate index out of range");
  return FVector{field, n, field.with_digit(0, n, i - 1, 1)};
}

// A subspace of F_q^n held by its reduced row echelon basis. Two values
// compare equal iff they are the same set of vectors.
class Subspace {
 public:
  Subspace() = default;

  // The zero subspace of F_q^n.
  Subspace(FieldSpec field, int n) : field_(field), n_(static_cast<std::uint8_t>(n)) {
    if (n < 1 || n > field.max_dim())
      throw OutOfRange("ambient dimension " + std::to_string(n) + " outside supported range");
  }

  static Subspace span(FieldSpec field, int n, std::span<const Word> rows) {
    Subspace s(field, n);
    for (Word r : rows) s.insert(r);
    return s;
  }

  static Subspace span(std::span<const FVector> vectors) {
    if (vectors.empty()) throw Error("span of an empty list needs an explicit ambient dimension");
    const FieldSpec field = vectors.front().field;
    const int n = vectors.front().n;
    Subspace s(field, n);
    for (const auto& v : vectors) {
      if (v.n != n || !(v.field == field)) throw DimensionMismatch("vectors of differing length or field");
      s.insert(v.packed);
    }
    return s;
  }

  static Subspace whole(FieldSpec field, int n) {
    Subspace s(field, n);
    for (int i = 1; i <= n; ++i) s.insert(unit_vector(field, n, i).packed);
    return s;
  }

  const FieldSpec& field() const { return field_; }
  int n() const { return n_; }
  int dim() const { return k_; }
  std::span<const Word> rows() const { return {rows_.data(), k_}; }
  FVector row(int i) const { return FVector{field_, n_, rows_[static_cast<std::size_t>(i)]}; }

  std::vector<int> pivots() const {
    std::vector<int> p;
    for (int i = 0; i < k_; ++i) p.push_back(field_.leading(rows_[static_cast<std::size_t>(i)], n_));
    return p;
  }

  // Component of v not removed by the basis; zero iff v lies in the span.
  Word reduce(Word v) const {
    if (field_.binary()) {
      for (int i = 0; i < k_; ++i) {
        const Word r = rows_[static_cast<std::size_t>(i)];
        if (v & std::bit_floor(r)) v ^= r;
      }
      return v;
    }
    for (int i = 0; i < k_; ++i) {
      const Word r = rows_[static_cast<std::size_t>(i)];
      const int c = field_.digit(v, n_, field_.leading(r, n_));
      if (c) v = field_.sub_scaled(v, r, c);
    }
    return v;
  }

  bool contains(Word v) const { return reduce(v) == 0; }
  bool contains(const FVector& v) const {
    check_same(v.n, v.field);
    return contains(v.packed);
  }
  bool contains(const Subspace& other) const {
    check_same(other.n_, other.field_);
    for (Word r : other.rows())
      if (!contains(r)) return false;
    return true;
  }

  // Adds v to the span, keeping the basis reduced. Returns false if v was
  // already in the span.
  bool insert(Word v) {
    v = reduce(v);
    if (v == 0) return false;
    const int lead = field_.leading(v, n_);
    if (!field_.binary()) v = field_.scale(v, field_.inv(field_.digit(v, n_, lead)));
    // Clear the new pivot column from the existing rows.
    for (int i = 0; i < k_; ++i) {
      Word& r = rows_[static_cast<std::size_t>(i)];
      const int c = field_.digit(r, n_, lead);
      if (c) r = field_.sub_scaled(r, v, c);
    }
    int pos = k_;
    while (pos > 0 && field_.leading(rows_[static_cast<std::size_t>(pos - 1)], n_) > lead) {
      rows_[static_cast<std::size_t>(pos)] = rows_[static_cast<std::size_t>(pos - 1)];
      --pos;
    }
    rows_[static_cast<std::size_t>(pos)] = v;
    ++k_;
    return true;
  }

  // Lexicographic on the flattened basis, shorter bases first.
  friend std::strong_ordering operator<=>(const Subspace& a, const Subspace& b) {
    if (auto c = a.field_.q() <=> b.field_.q(); c != 0) return c;
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    if (auto c = a.k_ <=> b.k_; c != 0) return c;
    for (int i = 0; i < a.k_; ++i)
      if (auto c = a.rows_[static_cast<std::size_t>(i)] <=> b.rows_[static_cast<std::size_t>(i)]; c != 0) return c;
    return std::strong_ordering::equal;
  }
  friend bool operator==(const Subspace& a, const Subspace& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

  std::size_t hash() const {
    std::size_t h = static_cast<std::size_t>(field_.q()) * 1315423911u ^ (std::size_t{n_} << 8) ^ k_;
    for (int i = 0; i < k_; ++i)
      h = (h ^ rows_[static_cast<std::size_t>(i)]) * 0x9E3779B97F4A7C15ull;
    return h;
  }

  // One row per line as digit strings, no trailing newline.
  std::string to_text() const {
    std::string s;
    for (int i = 0; i < k_; ++i) {
      if (i) s += '\n';
      s += row(i).to_string();
    }
    return s;
  }

  // Rows joined by commas, for single-line reports.
  std::string to_inline() const {
    std::string s;
    for (int i = 0; i < k_; ++i) {
      if (i) s += ',';
      s += row(i).to_string();
    }
    return k_ ? s : std::string("0");
  }

  void check_same(int n, const FieldSpec& f) const {
    if (n != n_ || !(f == field_)) throw DimensionMismatch("subspaces of different ambient spaces");
  }

 private:
  FieldSpec field_{2};
  std::uint8_t n_ = 0;
  std::uint8_t k_ = 0;
  std::array<Word, kMaxDim> rows_{};
};

struct SubspaceHash {
  std::size_t operator()(const Subspace& s) const { return s.hash(); }
};

inline Subspace rref(std::span<const FVector> rows) { return Subspace::span(rows); }

inline Subspace sum(const Subspace& x, const Subspace& y) {
  x.check_same(y.n(), y.field());
  Subspace out = x;
  for (Word r : y.rows()) out.insert(r);
  return out;
}

inline int sum_dim(const Subspace& x, const Subspace& y) { return sum(x, y).dim(); }

// dim(X ∩ Y) from the dimension formula.
inline int intersection_dim(const Subspace& x, const Subspace& y) {
  return x.dim() + y.dim() - sum_dim(x, y);
}

// Orthogonal complement under the standard dot product.
inline Subspace orthocomplement(const Subspace& x) {
  const FieldSpec& f = x.field();
  const int n = x.n();
  const auto piv = x.pivots();
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (int p : piv) is_pivot[static_cast<std::size_t>(p)] = true;
  Subspace out(f, n);
  for (int col = 0; col < n; ++col) {
    if (is_pivot[static_cast<std::size_t>(col)]) continue;
    Word v = f.with_digit(0, n, col, 1);
    for (int r = 0; r < x.dim(); ++r) {
      const int c = f.digit(x.rows()[static_cast<std::size_t>(r)], n, col);
      if (c) v = f.with_digit(v, n, piv[static_cast<std::size_t>(r)], f.neg(c));
    }
    out.insert(v);
  }
  return out;
}

inline Subspace intersect(const Subspace& x, const Subspace& y) {
  x.check_same(y.n(), y.field());
  return orthocomplement(sum(orthocomplement(x), orthocomplement(y)));
}

// Kernel of the i-th coordinate functional, 1-based i.
inline Subspace coordinate_hyperplane(int i, int n, FieldSpec field = FieldSpec(2)) {
  if (i < 1 || i > n) throw OutOfRange("coordinate index out of range");
  Subspace s(field, n);
  for (int j = 1; j <= n; ++j)
    if (j != i) s.insert(unit_vector(field, n, j).packed);
  return s;
}

// q-binomial coefficient [n choose k]_q.
inline std::uint64_t gaussian_binomial(int n, int k, int q) {
  if (k < 0 || n < 0 || k > n) throw OutOfRange("gaussian_binomial requires 0 <= k <= n");
  using u128 = unsigned __int128;
  auto qpow = [q](int e) {
    u128 r = 1;
    for (int i = 0; i < e; ++i) r *= static_cast<u128>(q);
    return r;
  };
  u128 acc = 1;
  for (int i = 0; i < k; ++i) {
    acc = acc * (qpow(n - i) - 1) / (qpow(i + 1) - 1);
    if (acc > std::numeric_limits<std::uint64_t>::max()) throw OutOfRange("gaussian_binomial overflow");
  }
  return static_cast<std::uint64_t>(acc);
}

namespace detail {

// Calls emit(rows) for every k x n reduced echelon matrix, in no particular
// order.
template <class Emit>
void for_each_rref(const FieldSpec& f, int n, int k, Emit&& emit) {
  std::vector<int> piv(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) piv[static_cast<std::size_t>(i)] = i;
  std::vector<Word> rows(static_cast<std::size_t>(k));
  while (true) {
    // Free slots: (row, col) with col > pivot(row) and col not a pivot.
    std::vector<std::pair<int, int>> slots;
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (int p : piv) is_pivot[static_cast<std::size_t>(p)] = true;
    for (int r = 0; r < k; ++r)
      for (int c = piv[static_cast<std::size_t>(r)] + 1; c < n; ++c)
        if (!is_pivot[static_cast<std::size_t>(c)]) slots.emplace_back(r, c);
    std::vector<int> val(slots.size(), 0);
    while (true) {
      for (int r = 0; r < k; ++r) rows[static_cast<std::size_t>(r)] = f.with_digit(0, n, piv[static_cast<std::size_t>(r)], 1);
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (val[s]) {
          auto [r, c] = slots[s];
          rows[static_cast<std::size_t>(r)] = f.with_digit(rows[static_cast<std::size_t>(r)], n, c, val[s]);
        }
      emit(std::span<const Word>(rows));
      std::size_t s = 0;
      while (s < val.size() && ++val[s] == f.q()) val[s++] = 0;
      if (s == val.size()) break;
    }
    // Next combination of pivot columns.
    int i = k - 1;
    while (i >= 0 && piv[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++piv[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) piv[static_cast<std::size_t>(j)] = piv[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace detail

// All k-dimensional subspaces of F_q^n in lexicographic order of their
// canonical bases.
inline std::vector<Subspace> enumerate_subspaces(int n, int k, int q) {
  const FieldSpec f(q);
  if (n < 1 || n > f.max_dim()) throw OutOfRange("ambient dimension outside supported range");
  if (k < 0 || k > n) throw OutOfRange("subspace dimension outside [0, n]");
  if (gaussian_binomial(n, k, q) > kMaxEnumeration) throw OutOfRange("Grassmannian too large to enumerate");
  std::vector<Subspace> out;
  out.reserve(static_cast<std::size_t>(gaussian_binomial(n, k, q)));
  if (k == 0) {
    out.emplace_back(f, n);
    return out;
  }
  detail::for_each_rref(f, n, k, [&](std::span<const Word> rows) { out.push_back(Subspace::span(f, n, rows)); });
  std::sort(out.begin(), out.end());
  return out;
}

// All d-dimensional subspaces of x, in lexicographic order.
inline std::vector<Subspace> subspaces_of(const Subspace& x, int d) {
  if (d < 0 || d > x.dim()) throw OutOfRange("subspace dimension outside [0, dim X]");
  const FieldSpec& f = x.field();
  std::vector<Subspace> out;
  if (d == 0) {
    out.emplace_back(f, x.n());
    return out;
  }
  const int m = x.dim();
  detail::for_each_rref(f, m, d, [&](std::span<const Word> coeffs) {
    Subspace s(f, x.n());
    for (Word c : coeffs) {
      Word v = 0;
      for (int j = 0; j < m; ++j) {
        const int a = f.digit(c, m, j);
        if (a) v = f.add(v, f.scale(x.rows()[static_cast<std::size_t>(j)], a));
      }
      s.insert(v);
    }
    out.push_back(s);
  });
  std::sort(out.begin(), out.end());
  return out;
}

// The 1-dimensional subspaces of x.
inline std::vector<Subspace> points_of(const Subspace& x) { return subspaces_of(x, 1); }

// All (dim X + 1)-dimensional subspaces containing x, in lexicographic order.
inline std::vector<Subspace> supersets_of(const Subspace& x) {
  const FieldSpec& f = x.field();
  const int n = x.n();
  if (x.dim() >= n) return {};
  // V = X (+) span{e_c : c not a pivot of X}; supersets correspond to the
  // points of the complement.
  std::vector<int> free_cols;
  {
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (int p : x.pivots()) is_pivot[static_cast<std::size_t>(p)] = true;
    for (int c = 0; c < n; ++c)
      if (!is_pivot[static_cast<std::size_t>(c)]) free_cols.push_back(c);
  }
  const int m = static_cast<int>(free_cols.size());
  std::vector<Subspace> out;
  detail::for_each_rref(f, m, 1, [&](std::span<const Word> coeffs) {
    Word v = 0;
    for (int j = 0; j < m; ++j) v = f.with_digit(v, n, free_cols[static_cast<std::size_t>(j)], f.digit(coeffs[0], m, j));
    Subspace s = x;
    s.insert(v);
    out.push_back(s);
  });
  std::sort(out.begin(), out.end());
  return out;
}

// Text blocks: one row per line, blocks separated by blank lines.
inline std::string write_blocks(std::span<const Subspace> spaces) {
  std::string out;
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    if (i) out += "\n";
    out += spaces[i].to_text();
    out += "\n";
  }
  return out;
}

inline Subspace parse_subspace(std::string_view text, FieldSpec field = FieldSpec(2)) {
  std::vector<FVector> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(FVector::parse(line, field));
  }
  return Subspace::span(rows);
}

inline std::vector<Subspace> parse_blocks(std::string_view text, FieldSpec field = FieldSpec(2)) {
  std::vector<Subspace> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<FVector> rows;
  auto flush = [&] {
    if (!rows.empty()) out.push_back(Subspace::span(rows));
    rows.clear();
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    rows.push_back(FVector::parse(line, field));
  }
  flush();
  return out;
}

}  // namespace codegraph

template <>
struct std::hash<codegraph::Subspace> {
  std::size_t operator()(const codegraph::Subspace& s) const { return s.hash(); }
};
