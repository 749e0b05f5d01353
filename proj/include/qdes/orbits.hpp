// Orbit partitions of projective points and of r-spaces under a matrix
// group, the third-point table for q = 2, and the span-dimension census used
// as its independent check.
#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "qdes/group.hpp"

namespace qdes {

/// Partition of all projective points into group orbits. Orbits are ordered
/// by their lexicographically smallest member, which is also the orbit
/// representative; members are listed in ascending order.
struct PointOrbitPartition {
  FieldSpec spec;
  std::vector<Vec> points;               // all canonical points, ascending
  std::vector<std::vector<int>> orbits;  // point ids per orbit
  std::vector<int> orbit_of;             // point id -> orbit index

  int count() const { return static_cast<int>(orbits.size()); }
  std::int64_t size_of(int i) const {
    return static_cast<std::int64_t>(orbits[i].size());
  }
  std::vector<std::int64_t> sizes() const {
    std::vector<std::int64_t> s(orbits.size());
    for (std::size_t i = 0; i < orbits.size(); ++i) s[i] = orbits[i].size();
    return s;
  }
  const Vec& representative(int i) const { return points[orbits[i][0]]; }

  /// Index of a canonical point; -1 if absent.
  int point_id(const Vec& p) const {
    auto it = std::lower_bound(points.begin(), points.end(), p);
    if (it == points.end() || *it != p) return -1;
    return static_cast<int>(it - points.begin());
  }
  int orbit_index_of(const Vec& p) const {
    int id = point_id(p);
    if (id < 0) throw InputError("not a canonical projective point");
    return orbit_of[id];
  }
};

namespace detail {

// Generic orbit sweep: ids 0..n-1, image(id, generator) -> id. Scanning ids
// in ascending order makes orbit order and representatives deterministic.
template <class ImageFn>
std::pair<std::vector<std::vector<int>>, std::vector<int>> orbit_sweep(
    int n, int n_generators, ImageFn&& image) {
  std::vector<std::vector<int>> orbits;
  std::vector<int> orbit_of(n, -1);
  std::vector<int> stack;
  for (int start = 0; start < n; ++start) {
    if (orbit_of[start] >= 0) continue;
    int idx = static_cast<int>(orbits.size());
    std::vector<int> members{start};
    orbit_of[start] = idx;
    stack.assign(1, start);
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (int g = 0; g < n_generators; ++g) {
        int img = image(cur, g);
        if (orbit_of[img] >= 0) continue;
        orbit_of[img] = idx;
        members.push_back(img);
        stack.push_back(img);
      }
    }
    std::sort(members.begin(), members.end());
    orbits.push_back(std::move(members));
  }
  return {std::move(orbits), std::move(orbit_of)};
}

}  // namespace detail

inline PointOrbitPartition point_orbits(const MatrixGroup& g) {
  PointOrbitPartition part{g.spec, all_points(g.spec), {}, {}};
  const int n = static_cast<int>(part.points.size());
  auto image = [&](int id, int gi) {
    Vec y = canonical_point(g.spec,
                            apply(g.spec, part.points[id], g.generators[gi]));
    return part.point_id(y);
  };
  auto [orbits, orbit_of] = detail::orbit_sweep(
      n, static_cast<int>(g.generators.size()), image);
  part.orbits = std::move(orbits);
  part.orbit_of = std::move(orbit_of);
  return part;
}

/// Orbit partition of all r-spaces under the induced action.
struct SubspaceOrbitPartition {
  FieldSpec spec;
  int r = 0;
  std::vector<Subspace> spaces;          // all r-spaces, ascending
  std::vector<std::vector<int>> orbits;  // space ids per orbit
  std::vector<int> orbit_of;

  int count() const { return static_cast<int>(orbits.size()); }
  std::int64_t length_of(int i) const {
    return static_cast<std::int64_t>(orbits[i].size());
  }
  std::vector<std::int64_t> lengths() const {
    std::vector<std::int64_t> s(orbits.size());
    for (std::size_t i = 0; i < orbits.size(); ++i) s[i] = orbits[i].size();
    return s;
  }
  const Subspace& representative(int i) const { return spaces[orbits[i][0]]; }

  int space_id(const Subspace& s) const {
    auto it = std::lower_bound(spaces.begin(), spaces.end(), s);
    if (it == spaces.end() || !(*it == s)) return -1;
    return static_cast<int>(it - spaces.begin());
  }
};

inline SubspaceOrbitPartition subspace_orbits(const MatrixGroup& g, int r,
                                              std::int64_t limit = 5'000'000) {
  SubspaceOrbitPartition part{g.spec, r, enumerate_subspaces(g.spec, r, limit),
                              {}, {}};
  const int n = static_cast<int>(part.spaces.size());
  auto image = [&](int id, int gi) {
    Subspace s = apply(g.spec, part.spaces[id], g.generators[gi]);
    return part.space_id(s);
  };
  auto [orbits, orbit_of] = detail::orbit_sweep(
      n, static_cast<int>(g.generators.size()), image);
  part.orbits = std::move(orbits);
  part.orbit_of = std::move(orbit_of);
  return part;
}

/// Third-point table for q = 2. Entry (l, r, s) counts the points R in class
/// r, R distinct from a fixed P in class l, whose line third point P + R
/// falls in class s. For a group-induced partition the count does not depend
/// on the choice of P; the cross-check recomputes each row from a second
/// representative and throws DataError on disagreement.
struct ThirdPointTable {
  int m = 0;
  std::vector<std::int64_t> counts;  // m^3, index (l*m + r)*m + s

  std::int64_t at(int l, int r, int s) const {
    return counts[(std::size_t(l) * m + r) * m + s];
  }
  std::int64_t& at(int l, int r, int s) {
    return counts[(std::size_t(l) * m + r) * m + s];
  }
};

namespace detail {

inline void third_point_row(const PointOrbitPartition& part, int l,
                            int p_id, ThirdPointTable& t) {
  const Vec& p = part.points[p_id];
  for (int r = 0; r < part.count(); ++r) {
    for (int rid : part.orbits[r]) {
      if (rid == p_id) continue;
      Vec third = vec_add(part.spec, p, part.points[rid]);
      int s = part.orbit_of[part.point_id(third)];
      ++t.at(l, r, s);
    }
  }
}

}  // namespace detail

inline ThirdPointTable third_point_table(const PointOrbitPartition& part,
                                         bool cross_check = true) {
  if (part.spec.q != 2)
    throw InputError("third-point table is defined for q = 2 only");
  const int m = part.count();
  ThirdPointTable t{m, std::vector<std::int64_t>(std::size_t(m) * m * m, 0)};
  for (int l = 0; l < m; ++l)
    detail::third_point_row(part, l, part.orbits[l][0], t);

  if (cross_check) {
    for (int l = 0; l < m; ++l) {
      if (part.orbits[l].size() < 2) continue;
      ThirdPointTable alt{m,
                          std::vector<std::int64_t>(std::size_t(m) * m * m, 0)};
      detail::third_point_row(part, l, part.orbits[l][1], alt);
      for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s)
          if (t.at(l, r, s) != alt.at(l, r, s))
            throw DataError(
                "third-point counts depend on the representative; the "
                "partition is not group-induced");
    }
  }
  return t;
}

/// Split of a point class by span dimension: for fixed points P and R,
/// counts the points Q in class s with dim<P,R,Q> = 1, 2 and 3. Direct
/// computation over the whole class; used as an oracle for the closed forms
/// behind the triple bounds.
struct SpanDimCounts {
  std::int64_t dim1 = 0;
  std::int64_t dim2 = 0;
  std::int64_t dim3 = 0;
};

inline SpanDimCounts count_by_span_dim(const PointOrbitPartition& part,
                                       const Vec& p, const Vec& r, int s) {
  if (part.spec.q != 2)
    throw InputError("span-dimension census is defined for q = 2 only");
  SpanDimCounts out;
  for (int qid : part.orbits[s]) {
    std::vector<Vec> rows{p, r, part.points[qid]};
    int d = rref(part.spec, std::move(rows)).dim;
    if (d == 1)
      ++out.dim1;
    else if (d == 2)
      ++out.dim2;
    else
      ++out.dim3;
  }
  return out;
}

}  // namespace qdes
