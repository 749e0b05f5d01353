// Matrices over GF(q), canonical subspaces (reduced row echelon bases),
// membership and join, and direct enumeration of all r-spaces.
//
// A subspace is identified with its RREF basis, which makes equality,
// ordering and hashing structural. For q = 2 the row reduction kernels run
// on machine words (one bit per coordinate, XOR elimination); the general
// prime path uses modular arithmetic. Both produce the same canonical basis.
#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "qdes/field.hpp"

namespace qdes {

/// Dense row-major matrix over GF(q).
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<coord_t> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, 0) {}

  coord_t& at(int r, int c) { return a[std::size_t(r) * cols + c]; }
  coord_t at(int r, int c) const { return a[std::size_t(r) * cols + c]; }

  Vec row(int r) const {
    return Vec(a.begin() + std::size_t(r) * cols,
               a.begin() + std::size_t(r + 1) * cols);
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  friend bool operator==(const Mat&, const Mat&) = default;
  friend bool operator<(const Mat& x, const Mat& y) {
    if (x.rows != y.rows) return x.rows < y.rows;
    if (x.cols != y.cols) return x.cols < y.cols;
    return x.a < y.a;
  }
};

inline Mat mat_mul(const FieldSpec& f, const Mat& A, const Mat& B) {
  if (A.cols != B.rows) throw InputError("matrix shape mismatch");
  Mat C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      coord_t aik = A.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < B.cols; ++j) {
        C.at(i, j) = f.add(C.at(i, j), f.mul(aik, B.at(k, j)));
      }
    }
  return C;
}

/// Image of a row vector under a matrix: y = x * M.
inline Vec apply(const FieldSpec& f, const Vec& x, const Mat& M) {
  if (static_cast<int>(x.size()) != M.rows)
    throw InputError("vector/matrix shape mismatch");
  Vec y(M.cols, 0);
  for (int i = 0; i < M.rows; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < M.cols; ++j)
      y[j] = f.add(y[j], f.mul(x[i], M.at(i, j)));
  }
  return y;
}

/// A subspace of GF(q)^v in canonical form: the basis is the unique RREF
/// matrix of the space with zero rows dropped. Two Subspace values are equal
/// iff they describe the same subspace.
struct Subspace {
  int v = 0;
  int dim = 0;
  std::vector<coord_t> basis;  // dim x v, row-major, RREF

  coord_t at(int r, int c) const { return basis[std::size_t(r) * v + c]; }

  Vec row(int r) const {
    return Vec(basis.begin() + std::size_t(r) * v,
               basis.begin() + std::size_t(r + 1) * v);
  }

  friend bool operator==(const Subspace&, const Subspace&) = default;
  friend bool operator<(const Subspace& x, const Subspace& y) {
    if (x.dim != y.dim) return x.dim < y.dim;
    return x.basis < y.basis;
  }
};

namespace detail {

// q = 2 kernels: a row is a word with bit i = coordinate i. Reduction is
// XOR; the pivot of a row is its lowest set bit.
inline int gf2_rref_words(std::vector<std::uint64_t>& basis,
                          std::uint64_t w) {
  for (std::uint64_t b : basis) {
    std::uint64_t pivot = b & -b;
    if (w & pivot) w ^= b;
  }
  if (w == 0) return 0;
  std::uint64_t pivot = w & -w;
  for (auto& b : basis)
    if (b & pivot) b ^= w;
  auto pos = std::find_if(basis.begin(), basis.end(),
                          [&](std::uint64_t b) { return (b & -b) > pivot; });
  basis.insert(pos, w);
  return 1;
}

inline std::uint64_t pack_gf2(const coord_t* p, int v) {
  std::uint64_t w = 0;
  for (int i = 0; i < v; ++i)
    if (p[i]) w |= std::uint64_t(1) << i;
  return w;
}

inline std::uint64_t pack_gf2(const Vec& x) {
  return pack_gf2(x.data(), static_cast<int>(x.size()));
}

inline Vec unpack_gf2(std::uint64_t w, int v) {
  Vec x(v, 0);
  for (int i = 0; i < v; ++i)
    if (w >> i & 1) x[i] = 1;
  return x;
}

// Generic RREF, in place over a list of rows. Returns the rank; the first
// `rank` rows hold the canonical basis afterwards.
inline int rref_rows(const FieldSpec& f, std::vector<Vec>& rows) {
  const int v = f.v;
  int pr = 0;
  for (int c = 0; c < v && pr < static_cast<int>(rows.size()); ++c) {
    int sel = -1;
    for (int i = pr; i < static_cast<int>(rows.size()); ++i)
      if (rows[i][c] != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[pr], rows[sel]);
    if (rows[pr][c] != 1) {
      coord_t s = f.inv(rows[pr][c]);
      for (auto& e : rows[pr]) e = f.mul(e, s);
    }
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == pr || rows[i][c] == 0) continue;
      coord_t factor = rows[i][c];
      for (int j = c; j < v; ++j)
        rows[i][j] = f.sub(rows[i][j], f.mul(factor, rows[pr][j]));
    }
    ++pr;
  }
  return pr;
}

}  // namespace detail

/// Canonical subspace spanned by the given rows. Any two spanning sets of
/// the same space produce bitwise identical results. Empty input yields the
/// zero space.
inline Subspace rref(const FieldSpec& f, std::vector<Vec> rows) {
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != f.v)
      throw InputError("row length does not match ambient dimension");
    for (coord_t c : r)
      if (c >= f.q) throw InputError("row entry out of field range");
  }
  Subspace s;
  s.v = f.v;
  if (f.q == 2 && f.v <= 64) {
    std::vector<std::uint64_t> basis;
    for (const auto& r : rows) detail::gf2_rref_words(basis, detail::pack_gf2(r));
    s.dim = static_cast<int>(basis.size());
    s.basis.reserve(std::size_t(s.dim) * f.v);
    for (std::uint64_t w : basis) {
      Vec r = detail::unpack_gf2(w, f.v);
      s.basis.insert(s.basis.end(), r.begin(), r.end());
    }
    return s;
  }
  s.dim = detail::rref_rows(f, rows);
  s.basis.reserve(std::size_t(s.dim) * f.v);
  for (int i = 0; i < s.dim; ++i)
    s.basis.insert(s.basis.end(), rows[i].begin(), rows[i].end());
  return s;
}

/// True iff the point lies in the subspace.
inline bool contains(const FieldSpec& f, const Subspace& s, const Vec& p) {
  if (s.v != f.v || static_cast<int>(p.size()) != f.v)
    throw InputError("subspace/point dimension mismatch");
  if (f.q == 2 && f.v <= 64) {
    std::uint64_t w = detail::pack_gf2(p);
    for (int i = 0; i < s.dim; ++i) {
      std::uint64_t b =
          detail::pack_gf2(s.basis.data() + std::size_t(i) * f.v, f.v);
      if (w & (b & -b)) w ^= b;
    }
    return w == 0;
  }
  Vec x = p;
  for (int i = 0; i < s.dim; ++i) {
    // pivot column of basis row i = first nonzero entry
    int c = 0;
    while (s.at(i, c) == 0) ++c;
    if (x[c] == 0) continue;
    coord_t factor = x[c];
    for (int j = c; j < f.v; ++j)
      x[j] = f.sub(x[j], f.mul(factor, s.at(i, j)));
  }
  return is_zero(x);
}

/// dim <U, V>, the dimension of the span of the union.
inline int join_dim(const FieldSpec& f, const Subspace& u, const Subspace& w) {
  if (u.v != f.v || w.v != f.v)
    throw InputError("subspace dimension mismatch");
  std::vector<Vec> rows;
  rows.reserve(u.dim + w.dim);
  for (int i = 0; i < u.dim; ++i) rows.push_back(u.row(i));
  for (int i = 0; i < w.dim; ++i) rows.push_back(w.row(i));
  return rref(f, std::move(rows)).dim;
}

/// Image of a subspace under the right action of M, re-canonicalized.
inline Subspace apply(const FieldSpec& f, const Subspace& s, const Mat& M) {
  std::vector<Vec> rows;
  rows.reserve(s.dim);
  for (int i = 0; i < s.dim; ++i) rows.push_back(apply(f, s.row(i), M));
  return rref(f, std::move(rows));
}

/// Visits every r-space of GF(q)^v exactly once by generating RREF bases
/// directly: choose the pivot columns, then run through all assignments of
/// the free entries. No dedup pass is needed.
template <class Fn>
void for_each_subspace(const FieldSpec& f, int r, Fn&& visit) {
  if (r < 0 || r > f.v) throw InputError("subspace dimension out of range");
  if (r == 0) {
    Subspace zero;
    zero.v = f.v;
    visit(zero);
    return;
  }
  const int v = f.v;
  std::vector<int> piv(r);
  for (int i = 0; i < r; ++i) piv[i] = i;

  auto emit_pattern = [&](const std::vector<int>& p) {
    std::vector<bool> is_pivot(v, false);
    for (int c : p) is_pivot[c] = true;
    // Free cells: row i, columns right of p[i] that are not pivot columns.
    std::vector<std::pair<int, int>> free_cells;
    for (int i = 0; i < r; ++i)
      for (int c = p[i] + 1; c < v; ++c)
        if (!is_pivot[c]) free_cells.emplace_back(i, c);

    Mat basis(r, v);
    for (int i = 0; i < r; ++i) basis.at(i, p[i]) = 1;
    while (true) {
      Subspace s;
      s.v = v;
      s.dim = r;
      s.basis = basis.a;
      visit(s);
      int i = static_cast<int>(free_cells.size()) - 1;
      for (; i >= 0; --i) {
        auto [fr, fc] = free_cells[i];
        if (basis.at(fr, fc) + 1 < f.q) {
          ++basis.at(fr, fc);
          break;
        }
        basis.at(fr, fc) = 0;
      }
      if (i < 0) break;
    }
  };

  // Iterate pivot-column combinations in lexicographic order.
  while (true) {
    emit_pattern(piv);
    int i = r - 1;
    while (i >= 0 && piv[i] == v - r + i) --i;
    if (i < 0) break;
    ++piv[i];
    for (int j = i + 1; j < r; ++j) piv[j] = piv[j - 1] + 1;
  }
}

/// All r-spaces of GF(q)^v, sorted lexicographically on their bases.
inline std::vector<Subspace> enumerate_subspaces(
    const FieldSpec& f, int r, std::int64_t limit = 5'000'000) {
  std::int64_t count = gauss_binomial(f.v, r, f.q);
  if (count > limit) throw LimitError("subspace enumeration over limit: " +
                                      std::to_string(count));
  std::vector<Subspace> out;
  out.reserve(static_cast<std::size_t>(count));
  for_each_subspace(f, r, [&](const Subspace& s) { out.push_back(s); });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace qdes
