// Finite matrix groups given by generators: closure, element list, order.
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <vector>

#include "qdes/subspace.hpp"

namespace qdes {

/// A finite subgroup of GL_v(q) with its full element list. Points and
/// subspaces are acted on from the right (row vector times matrix).
struct MatrixGroup {
  FieldSpec spec;
  std::vector<Mat> generators;
  std::vector<Mat> elements;  // breadth-first from the identity

  std::int64_t order() const { return static_cast<std::int64_t>(elements.size()); }
};

inline int mat_rank(const FieldSpec& f, const Mat& m) {
  std::vector<Vec> rows;
  rows.reserve(m.rows);
  for (int i = 0; i < m.rows; ++i) rows.push_back(m.row(i));
  return rref(f, std::move(rows)).dim;
}

/// Multiplicative closure of the generators. Elements are discovered
/// breadth-first from the identity, multiplying by generators in input
/// order, which fixes the element order independent of hashing.
inline MatrixGroup close_group(const FieldSpec& f, std::vector<Mat> generators,
                               std::int64_t cap = 1'000'000) {
  for (const auto& g : generators) {
    if (g.rows != f.v || g.cols != f.v)
      throw InputError("generator is not a v x v matrix");
    for (coord_t c : g.a)
      if (c >= f.q) throw InputError("generator entry out of field range");
    if (mat_rank(f, g) != f.v)
      throw InputError("generator matrix is singular");
  }

  MatrixGroup grp{f, generators, {}};
  std::map<std::vector<coord_t>, int> seen;
  std::deque<int> queue;

  Mat id = Mat::identity(f.v);
  grp.elements.push_back(id);
  seen.emplace(id.a, 0);
  queue.push_back(0);

  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    for (const auto& g : generators) {
      Mat next = mat_mul(f, grp.elements[cur], g);
      if (seen.contains(next.a)) continue;
      if (static_cast<std::int64_t>(grp.elements.size()) >= cap)
        throw LimitError("group order exceeds cap of " + std::to_string(cap));
      seen.emplace(next.a, static_cast<int>(grp.elements.size()));
      queue.push_back(static_cast<int>(grp.elements.size()));
      grp.elements.push_back(std::move(next));
    }
  }
  return grp;
}

}  // namespace qdes
