// Shared reference data for the two cyclic-group searches used across the
// test suites: generators, orbit representatives, and the known candidate
// matrices (in the row order of the representative lists below).
#pragma once

#include <vector>

#include "qdes/group.hpp"
#include "qdes/orbits.hpp"
#include "qdes/tactical.hpp"

namespace fixtures {

using qdes::Mat;
using qdes::Vec;

inline Mat matrix_from(std::vector<std::vector<int>> rows) {
  Mat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      m.at(i, j) = static_cast<qdes::coord_t>(rows[i][j]);
  return m;
}

// Order-3 subgroup of GL_4(2); the search target is 2-(4,3,3;2).
inline Mat c3_generator() {
  return matrix_from({{0, 0, 0, 1},
                      {0, 0, 1, 0},
                      {0, 1, 1, 0},
                      {1, 0, 0, 1}});
}

inline std::vector<Vec> c3_point_reps() {
  return {{1, 0, 0, 0}, {1, 0, 1, 0}, {1, 0, 1, 1}, {1, 1, 0, 0}, {0, 1, 0, 0}};
}

// The two candidate matrices for the C3 search (rows in c3_point_reps order);
// only the first survives the triple-bound filter.
inline std::vector<std::vector<std::int64_t>> c3_matrix_good() {
  return {{3, 1, 1, 1, 1},
          {1, 3, 1, 1, 1},
          {1, 1, 3, 1, 1},
          {1, 1, 1, 3, 1},
          {1, 1, 1, 1, 3}};
}

inline std::vector<std::vector<std::int64_t>> c3_matrix_rejected() {
  return {{3, 1, 1, 1, 1},
          {1, 2, 2, 2, 0},
          {1, 2, 2, 0, 2},
          {1, 2, 0, 2, 2},
          {1, 0, 2, 2, 2}};
}

// Order-31 subgroup of GL_6(2); the search target is 2-(6,3,6;2).
inline Mat c31_generator() {
  return matrix_from({{0, 1, 0, 0, 0, 0},
                      {0, 0, 1, 0, 0, 0},
                      {0, 0, 0, 1, 0, 0},
                      {0, 0, 0, 0, 1, 0},
                      {0, 0, 0, 0, 0, 1},
                      {1, 0, 0, 0, 1, 1}});
}

// Class 1 is the fixed point; classes 2 and 3 are the two 31-point orbits.
inline std::vector<Vec> c31_point_reps() {
  return {{1, 1, 1, 1, 0, 1}, {1, 0, 0, 0, 0, 0}, {1, 0, 0, 0, 0, 1}};
}

// The three candidates eliminated by the triple bounds (18 block classes of
// length 31 each).
inline std::vector<std::vector<std::vector<std::int64_t>>>
c31_rejected_matrices() {
  return {
      {{31, 31, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
       {0, 6, 1, 3, 3, 3, 3, 3, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4},
       {6, 0, 6, 4, 4, 4, 4, 4, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3}},
      {{31, 31, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
       {0, 6, 2, 2, 2, 3, 3, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4},
       {6, 0, 5, 5, 5, 4, 4, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3}},
      {{31, 31, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
       {6, 0, 5, 5, 4, 4, 4, 4, 4, 3, 3, 3, 3, 3, 3, 3, 3, 2},
       {0, 6, 2, 2, 3, 3, 3, 3, 3, 4, 4, 4, 4, 4, 4, 4, 4, 5}}};
}

// The unique candidate for which designs exist.
inline std::vector<std::vector<std::int64_t>> c31_matrix_constructible() {
  return {{31, 31, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
          {3, 3, 0, 0, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4},
          {3, 3, 7, 7, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3}};
}

// Maps reference row index (position in the representative list) to the
// orbit index of the computed partition.
inline std::vector<int> row_map(const qdes::PointOrbitPartition& part,
                                const std::vector<Vec>& reps) {
  std::vector<int> map(reps.size());
  for (std::size_t i = 0; i < reps.size(); ++i)
    map[i] = part.orbit_index_of(reps[i]);
  return map;
}

/// Builds a TacticalMatrix from rows given in reference order, re-homed to
/// the computed orbit numbering. All block classes share `length`.
inline qdes::TacticalMatrix to_matrix(
    const qdes::PointOrbitPartition& part, const std::vector<Vec>& reps,
    const std::vector<std::vector<std::int64_t>>& ref_rows,
    std::int64_t length) {
  const int m = static_cast<int>(ref_rows.size());
  const int n = static_cast<int>(ref_rows[0].size());
  auto map = row_map(part, reps);
  qdes::TacticalMatrix mat;
  mat.sizes = part.sizes();
  mat.lengths.assign(n, length);
  mat.rho.assign(std::size_t(m) * n, 0);
  mat.kappa.assign(std::size_t(m) * n, 0);
  for (int ref = 0; ref < m; ++ref) {
    int i = map[ref];
    for (int j = 0; j < n; ++j) {
      std::int64_t r = ref_rows[ref][j];
      mat.rho[std::size_t(i) * n + j] = r;
      mat.kappa[std::size_t(i) * n + j] = r * mat.sizes[i] / length;
    }
  }
  return mat;
}

}  // namespace fixtures
