// Necessary-condition filter for q = 2.
//
// For a fixed point class l and classes r, s, the triple sum
//   T = sum_j rho_lj kappa_rj kappa_sj
// counts triples (R, S, block) with R in class r, S in class s and the block
// containing P, R and S for a fixed P in class l. Splitting that count by
// dim<P,R,S> gives an exact part (spans of dimension 1 and 2, where the
// number of blocks through the span is lambda1 resp. lambda2) plus a
// dimension-3 part that is only bounded: each 3-dimensional span lies in at
// most phi = min(lambda2, [v-3 k-3]_q) blocks. The exact part depends only
// on the class sizes and the third-point table, so every candidate matrix
// must satisfy lower <= T <= upper. Matrices violating any triple cannot
// belong to a design.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qdes/orbits.hpp"
#include "qdes/tactical.hpp"

namespace qdes {

struct TripleBound {
  int l = 0, r = 0, s = 0;  // 0-based class indices
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  Rational value;  // filled in when evaluated against a matrix
};

/// Exact value of sum_j rho_lj kappa_rj kappa_sj, computed from rho alone:
/// kappa_ij = |class_i| rho_ij / |block class_j|. Integral whenever the
/// matrix has integral kappa.
inline Rational triple_sum(const TacticalMatrix& mat, int l, int r, int s) {
  const int m = mat.m(), n = mat.n();
  if (l < 0 || r < 0 || s < 0 || l >= m || r >= m || s >= m)
    throw InputError("triple_sum index out of range");
  Rational total(0);
  for (int j = 0; j < n; ++j) {
    Rational term =
        Rational(checked_mul(mat.sizes[r], mat.sizes[s])) /
        Rational(checked_mul(mat.lengths[j], mat.lengths[j]));
    term = term * Rational(mat.rho_at(l, j)) * Rational(mat.rho_at(r, j)) *
           Rational(mat.rho_at(s, j));
    total = total + term;
  }
  return total;
}

/// Lower and upper bound for the (l, r, s) triple sum. The lower bound is
/// the exact dimension-1/2 part; the upper bound adds the dimension-3 cap.
inline TripleBound triple_bounds(const DesignParams& params,
                                 const std::vector<std::int64_t>& sizes,
                                 const ThirdPointTable& table, int l, int r,
                                 int s) {
  if (params.q() != 2)
    throw InputError("triple bounds are defined for q = 2 only");
  const int m = table.m;
  if (l < 0 || r < 0 || s < 0 || l >= m || r >= m || s >= m)
    throw InputError("triple bound index out of range");
  if (static_cast<int>(sizes.size()) != m)
    throw InputError("sizes do not match the third-point table");

  // The triple sum is symmetric in (r, s); reduce the l = s case to l = r.
  if (l == s && l != r) std::swap(r, s);

  const std::int64_t sl = sizes[l], sr = sizes[r], ss = sizes[s];
  const std::int64_t sigma = table.at(l, r, s);
  const std::int64_t lambda1 = params.lambda1, lambda2 = params.lambda2;

  std::int64_t lower, cap_coeff;
  if (l == r && r == s) {
    lower = checked_add(
        lambda1,
        checked_mul(checked_add(checked_mul(3, sl), sigma - 3), lambda2));
    cap_coeff = checked_mul(sl, sl) - 3 * sl - sigma + 2;
  } else if (l == r) {  // l = r != s
    lower = checked_mul(checked_add(ss, sigma), lambda2);
    cap_coeff = checked_sub(checked_mul(sr, ss), checked_add(ss, sigma));
  } else if (r == s) {  // l != r = s
    lower = checked_mul(checked_add(ss, sigma), lambda2);
    cap_coeff = checked_sub(checked_mul(sr, ss), checked_add(sr, sigma));
  } else {  // all distinct
    lower = checked_mul(sigma, lambda2);
    cap_coeff = checked_sub(checked_mul(sr, ss), sigma);
  }
  if (cap_coeff < 0)
    throw DataError("negative dimension-3 capacity; third-point table is "
                    "inconsistent with the class sizes");

  TripleBound out;
  out.l = l;
  out.r = r;
  out.s = s;
  out.lower = lower;
  out.upper = checked_add(lower, checked_mul(cap_coeff, params.phi));
  return out;
}

struct FilterReport {
  struct Rejection {
    TacticalMatrix matrix;
    TripleBound violation;  // first violated triple in (l, r, s) order
  };
  std::vector<TacticalMatrix> accepted;
  std::vector<Rejection> rejected;
};

/// Applies every triple bound (all l, unordered {r, s}) to each matrix.
/// Input order is preserved in both output lists; the recorded violation is
/// the lexicographically first one.
inline FilterReport filter_matrices(const std::vector<TacticalMatrix>& input,
                                    const DesignParams& params,
                                    const std::vector<std::int64_t>& sizes,
                                    const ThirdPointTable& table) {
  const int m = table.m;
  std::vector<TripleBound> bounds;
  bounds.reserve(std::size_t(m) * m * (m + 1) / 2);
  for (int l = 0; l < m; ++l)
    for (int r = 0; r < m; ++r)
      for (int s = r; s < m; ++s)
        bounds.push_back(triple_bounds(params, sizes, table, l, r, s));

  FilterReport report;
  for (const auto& mat : input) {
    const TripleBound* hit = nullptr;
    TripleBound found;
    for (const auto& bd : bounds) {
      Rational value = triple_sum(mat, bd.l, bd.r, bd.s);
      if (value < Rational(bd.lower) || value > Rational(bd.upper)) {
        found = bd;
        found.value = value;
        hit = &found;
        break;
      }
    }
    if (hit)
      report.rejected.push_back({mat, *hit});
    else
      report.accepted.push_back(mat);
  }
  return report;
}

}  // namespace qdes
