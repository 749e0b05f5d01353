// Prime field arithmetic, vectors over GF(q), canonical projective points
// and Gaussian binomial coefficients.
#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "qdes/common.hpp"

namespace qdes {

using coord_t = std::uint16_t;

/// Row vector with entries in [0, q).
using Vec = std::vector<coord_t>;

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Ambient space description: GF(q)^v with q prime.
struct FieldSpec {
  int q = 2;
  int v = 1;

  FieldSpec(int q_, int v_) : q(q_), v(v_) {
    if (!is_prime(q)) throw InputError("field order must be prime, got " +
                                       std::to_string(q));
    if (q > 32749) throw InputError("field order too large");
    if (v < 1) throw InputError("ambient dimension must be at least 1");
  }

  coord_t add(coord_t a, coord_t b) const {
    int s = a + b;
    return static_cast<coord_t>(s >= q ? s - q : s);
  }
  coord_t sub(coord_t a, coord_t b) const {
    int s = a - b;
    return static_cast<coord_t>(s < 0 ? s + q : s);
  }
  coord_t mul(coord_t a, coord_t b) const {
    return static_cast<coord_t>((std::uint32_t(a) * b) % q);
  }
  coord_t neg(coord_t a) const { return a == 0 ? 0 : static_cast<coord_t>(q - a); }

  /// Multiplicative inverse of a nonzero element (extended Euclid).
  coord_t inv(coord_t a) const {
    if (a == 0) throw Error("inverse of zero field element");
    int t = 0, new_t = 1, r = q, new_r = a;
    while (new_r != 0) {
      int quot = r / new_r;
      int tmp = t - quot * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - quot * new_r;
      r = new_r;
      new_r = tmp;
    }
    return static_cast<coord_t>(t < 0 ? t + q : t);
  }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

inline bool is_zero(const Vec& x) {
  return std::all_of(x.begin(), x.end(), [](coord_t c) { return c == 0; });
}

inline Vec vec_add(const FieldSpec& f, const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw InputError("vector length mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.add(a[i], b[i]);
  return r;
}

/// Scales a nonzero vector so that its first nonzero coordinate is 1. The
/// result is the unique representative of the 1-space spanned by the input.
inline Vec canonical_point(const FieldSpec& f, Vec raw) {
  if (static_cast<int>(raw.size()) != f.v)
    throw InputError("vector length does not match ambient dimension");
  for (coord_t c : raw)
    if (c >= f.q) throw InputError("vector entry out of field range");
  auto it = std::find_if(raw.begin(), raw.end(),
                         [](coord_t c) { return c != 0; });
  if (it == raw.end())
    throw InputError("zero vector does not span a projective point");
  if (*it != 1) {
    coord_t s = f.inv(*it);
    for (auto& c : raw) c = f.mul(c, s);
  }
  return raw;
}

inline bool is_canonical_point(const FieldSpec& f, const Vec& x) {
  if (static_cast<int>(x.size()) != f.v) return false;
  for (coord_t c : x)
    if (c != 0) return c == 1;
  return false;
}

/// All canonical projective points of GF(q)^v in lexicographic order.
inline std::vector<Vec> all_points(const FieldSpec& f,
                                   std::int64_t limit = 5'000'000) {
  std::int64_t count = 0;
  for (int p = 0; p < f.v; ++p)
    count = checked_add(count, checked_pow(f.q, f.v - 1 - p, "point count"));
  if (count > limit) throw LimitError("projective point set too large");

  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(count));
  // Points whose leading 1 sits further right are lexicographically smaller,
  // so emit pivot positions from the right and count suffixes upward.
  for (int p = f.v - 1; p >= 0; --p) {
    Vec x(f.v, 0);
    x[p] = 1;
    while (true) {
      pts.push_back(x);
      int i = f.v - 1;
      for (; i > p; --i) {
        if (x[i] + 1 < f.q) {
          ++x[i];
          break;
        }
        x[i] = 0;
      }
      if (i == p) break;
    }
  }
  return pts;
}

/// Gaussian binomial coefficient: the number of r-dimensional subspaces of
/// an n-dimensional space over GF(q). Exact; throws on 64-bit overflow.
inline std::int64_t gauss_binomial(int n, int r, std::int64_t q) {
  if (r < 0) throw InputError("gauss_binomial with negative r");
  if (q < 2) throw InputError("gauss_binomial needs q >= 2");
  if (n < 0 || r > n) return 0;
  if (r > n - r) r = n - r;
  using i128 = __int128;
  auto pow128 = [&](int e) {
    i128 p = 1;
    for (int i = 0; i < e; ++i) {
      p *= q;
      if (p > i128(INT64_MAX) * INT64_MAX) throw_overflow("gauss_binomial");
    }
    return p;
  };
  i128 g = 1;
  for (int i = 1; i <= r; ++i) {
    i128 numer = pow128(n - r + i) - 1;
    i128 denom = pow128(i) - 1;
    if (g > (i128(INT64_MAX) * INT64_MAX) / numer) throw_overflow("gauss_binomial");
    g = g * numer / denom;  // exact: g is again a Gaussian binomial
  }
  if (g > INT64_MAX) throw_overflow("gauss_binomial");
  return static_cast<std::int64_t>(g);
}

}  // namespace qdes
