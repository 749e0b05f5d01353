// Construction of designs with a prescribed group, guided by a candidate
// tactical decomposition matrix, plus full verification of the result.
//
// The selection problem: pick k-space orbits, at most once each, so that
// (a) the multiset of (orbit length, rho-column) pairs equals the candidate
//     matrix's columns, and
// (b) every 2-space orbit representative lies in exactly lambda2 selected
//     blocks (the orbit incidence row sums).
// Orbits whose column does not occur in the candidate are discarded up
// front; the remaining orbits are grouped into buckets per column and the
// search picks a combination from each bucket, tightest bucket first.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qdes/orbits.hpp"
#include "qdes/refine.hpp"
#include "qdes/tactical.hpp"

namespace qdes {

/// Orbit incidence system: rows are 2-space orbits, columns are k-space
/// orbits, inc[t][k] counts the blocks of orbit k containing the
/// representative 2-space of orbit t. columns[k] is the rho-column of orbit
/// k against the point classes.
struct KramerMesnerSystem {
  DesignParams params;
  PointOrbitPartition points;
  SubspaceOrbitPartition two_spaces;
  SubspaceOrbitPartition blocks;                   // k-space orbits
  std::vector<std::vector<std::int64_t>> inc;      // rows x cols
  std::vector<std::vector<std::int64_t>> columns;  // per k-orbit, m entries
};

/// rho-column of one k-space orbit: entry i counts the orbit's members that
/// contain the representative point of class i. With cross_check set the
/// count is recomputed from every member of each point class and a
/// disagreement throws (it cannot happen for group orbits).
inline std::vector<std::int64_t> orbit_rho_column(
    const PointOrbitPartition& points, const SubspaceOrbitPartition& korb,
    int orbit_index, bool cross_check = false) {
  const FieldSpec& f = points.spec;
  std::vector<std::int64_t> col(points.count(), 0);
  for (int i = 0; i < points.count(); ++i) {
    const Vec& rep = points.representative(i);
    for (int sid : korb.orbits[orbit_index])
      if (contains(f, korb.spaces[sid], rep)) ++col[i];
    if (cross_check) {
      for (int pid : points.orbits[i]) {
        std::int64_t alt = 0;
        for (int sid : korb.orbits[orbit_index])
          if (contains(f, korb.spaces[sid], points.points[pid])) ++alt;
        if (alt != col[i])
          throw DataError("orbit incidence count depends on the point "
                          "representative");
      }
    }
  }
  return col;
}

inline KramerMesnerSystem build_km_system(const MatrixGroup& g,
                                          const DesignParams& params,
                                          std::int64_t limit = 5'000'000) {
  KramerMesnerSystem km{params,
                        point_orbits(g),
                        subspace_orbits(g, 2, limit),
                        subspace_orbits(g, params.k, limit),
                        {},
                        {}};
  const FieldSpec& f = g.spec;
  const int rows = km.two_spaces.count();
  const int cols = km.blocks.count();
  km.inc.assign(rows, std::vector<std::int64_t>(cols, 0));
  for (int t = 0; t < rows; ++t) {
    const Subspace& rep = km.two_spaces.representative(t);
    Vec r0 = rep.row(0), r1 = rep.row(1);
    for (int k = 0; k < cols; ++k) {
      std::int64_t c = 0;
      for (int sid : km.blocks.orbits[k]) {
        const Subspace& blk = km.blocks.spaces[sid];
        if (contains(f, blk, r0) && contains(f, blk, r1)) ++c;
      }
      km.inc[t][k] = c;
    }
  }
  km.columns.reserve(cols);
  for (int k = 0; k < cols; ++k)
    km.columns.push_back(orbit_rho_column(km.points, km.blocks, k));
  return km;
}

/// A constructed design: the selected k-space orbits and the resulting block
/// set in canonical order.
struct DesignInstance {
  DesignParams params;
  std::vector<int> selected_orbits;
  std::vector<Subspace> blocks;
};

namespace detail {

struct Bucket {
  std::vector<int> orbit_ids;  // ascending
  int need = 0;
};

class OrbitSelection {
 public:
  OrbitSelection(const KramerMesnerSystem& km, std::vector<Bucket> buckets,
                 std::int64_t limit, SearchStats& stats,
                 std::vector<std::vector<int>>& out)
      : km_(km), buckets_(std::move(buckets)), limit_(limit), stats_(stats),
        out_(out), row_sum_(km.two_spaces.count(), 0) {
    const int rows = km_.two_spaces.count();
    const int nb = static_cast<int>(buckets_.size());

    // Heavy orbits first within each bucket, so row caps bite early.
    for (auto& bucket : buckets_) {
      std::sort(bucket.orbit_ids.begin(), bucket.orbit_ids.end(),
                [&](int a, int b2) {
                  std::int64_t wa = 0, wb = 0;
                  for (int t = 0; t < rows; ++t) {
                    wa += km_.inc[t][a] * km_.inc[t][a];
                    wb += km_.inc[t][b2] * km_.inc[t][b2];
                  }
                  if (wa != wb) return wa > wb;
                  return a < b2;
                });
    }

    // suf_top_/suf_bot_[b]: for every suffix start i, row t and count k,
    // the largest/smallest sum of k incidence values among orbits i.. of
    // the bucket. Bounds what the rest of a bucket can still contribute.
    suf_top_.resize(nb);
    suf_bot_.resize(nb);
    for (int b = 0; b < nb; ++b) {
      const auto& ids = buckets_[b].orbit_ids;
      const int sz = static_cast<int>(ids.size());
      const int kk = buckets_[b].need + 1;
      suf_top_[b].assign(std::size_t(sz + 1) * rows * kk, 0);
      suf_bot_[b].assign(std::size_t(sz + 1) * rows * kk, 0);
      for (int t = 0; t < rows; ++t)
        for (int i = 0; i <= sz; ++i) {
          std::vector<std::int64_t> vals;
          vals.reserve(sz - i);
          for (int j = i; j < sz; ++j) vals.push_back(km_.inc[t][ids[j]]);
          std::sort(vals.rbegin(), vals.rend());
          for (int k = 1; k < kk && k <= static_cast<int>(vals.size()); ++k) {
            suf_mut(suf_top_, b, i, t, k, rows, kk) =
                suf_mut(suf_top_, b, i, t, k - 1, rows, kk) + vals[k - 1];
            suf_mut(suf_bot_, b, i, t, k, rows, kk) =
                suf_mut(suf_bot_, b, i, t, k - 1, rows, kk) +
                vals[vals.size() - k];
          }
        }
    }

    tail_top_.assign(std::size_t(nb + 1) * rows, 0);
    tail_bot_.assign(std::size_t(nb + 1) * rows, 0);
    for (int b = nb - 1; b >= 0; --b)
      for (int t = 0; t < rows; ++t) {
        const int kk = buckets_[b].need + 1;
        tail_top_[std::size_t(b) * rows + t] =
            tail_top_[std::size_t(b + 1) * rows + t] +
            suf(suf_top_, b, 0, t, buckets_[b].need, rows, kk);
        tail_bot_[std::size_t(b) * rows + t] =
            tail_bot_[std::size_t(b + 1) * rows + t] +
            suf(suf_bot_, b, 0, t, buckets_[b].need, rows, kk);
      }
  }

  void run() { pick_bucket(0); }

 private:
  bool done() const {
    return limit_ > 0 &&
           static_cast<std::int64_t>(out_.size()) >= limit_;
  }

  void pick_bucket(int b) {
    if (done()) return;
    const int rows = km_.two_spaces.count();
    for (int t = 0; t < rows; ++t) {
      if (row_sum_[t] > km_.params.lambda2) return;
      if (row_sum_[t] + tail_top_[std::size_t(b) * rows + t] <
              km_.params.lambda2 ||
          row_sum_[t] + tail_bot_[std::size_t(b) * rows + t] >
              km_.params.lambda2) {
        ++stats_.pruned_tail;
        return;
      }
    }
    if (b == static_cast<int>(buckets_.size())) {
      for (int t = 0; t < rows; ++t)
        if (row_sum_[t] != km_.params.lambda2) return;
      std::vector<int> sel = current_;
      std::sort(sel.begin(), sel.end());
      out_.push_back(std::move(sel));
      ++stats_.solutions;
      return;
    }
    choose(b, 0, buckets_[b].need);
  }

  void choose(int b, std::size_t from, int left) {
    if (done()) return;
    ++stats_.nodes;
    if (left == 0) {
      pick_bucket(b + 1);
      return;
    }
    // Best/worst completion bounds: the `left` picks still owed from the
    // rest of this bucket plus the full need of the later buckets must be
    // able to land exactly on lambda2 for every row.
    const int rows = km_.two_spaces.count();
    const int kk = buckets_[b].need + 1;
    for (int t = 0; t < rows; ++t) {
      std::int64_t hi = suf(suf_top_, b, static_cast<int>(from), t, left,
                            rows, kk) +
                        tail_top_[std::size_t(b + 1) * rows + t];
      std::int64_t lo = suf(suf_bot_, b, static_cast<int>(from), t, left,
                            rows, kk) +
                        tail_bot_[std::size_t(b + 1) * rows + t];
      if (row_sum_[t] + hi < km_.params.lambda2 ||
          row_sum_[t] + lo > km_.params.lambda2) {
        ++stats_.pruned_tail;
        return;
      }
    }
    const auto& ids = buckets_[b].orbit_ids;
    for (std::size_t i = from; i + left <= ids.size(); ++i) {
      int k = ids[i];
      if (!apply_orbit(k, +1)) {
        apply_orbit(k, -1);
        ++stats_.pruned_row_sum;
        continue;
      }
      current_.push_back(k);
      choose(b, i + 1, left - 1);
      current_.pop_back();
      apply_orbit(k, -1);
    }
  }

  bool apply_orbit(int k, int sign) {
    bool ok = true;
    const int rows = km_.two_spaces.count();
    for (int t = 0; t < rows; ++t) {
      row_sum_[t] += sign * km_.inc[t][k];
      if (row_sum_[t] > km_.params.lambda2) ok = false;
    }
    return ok;
  }

  static std::int64_t& suf_mut(std::vector<std::vector<std::int64_t>>& store,
                           int b, int i, int t, int k, int rows, int kk) {
    return store[b][(std::size_t(i) * rows + t) * kk + k];
  }
  std::int64_t suf(const std::vector<std::vector<std::int64_t>>& store, int b,
                   int i, int t, int k, int rows, int kk) const {
    return store[b][(std::size_t(i) * rows + t) * kk + k];
  }

  const KramerMesnerSystem& km_;
  std::vector<Bucket> buckets_;
  std::int64_t limit_;
  SearchStats& stats_;
  std::vector<std::vector<int>>& out_;
  std::vector<std::int64_t> row_sum_;
  std::vector<std::vector<std::int64_t>> suf_top_;
  std::vector<std::vector<std::int64_t>> suf_bot_;
  std::vector<std::int64_t> tail_top_;
  std::vector<std::int64_t> tail_bot_;
  std::vector<int> current_;
};

}  // namespace detail

/// Searches for designs whose group-induced decomposition matrix equals the
/// candidate. Returns up to `limit` designs (0 = all), sorted by selected
/// orbit set. The candidate must satisfy the equation system.
inline std::vector<DesignInstance> search_designs(const KramerMesnerSystem& km,
                                                  const TacticalMatrix& cand,
                                                  std::int64_t limit = 0,
                                                  SearchStats* stats_out = nullptr) {
  if (!check_equations(km.params, cand).empty())
    throw InputError("candidate matrix violates the equation system");
  if (cand.m() != km.points.count())
    throw InputError("candidate row count does not match the point classes");

  // Column multiset of the candidate, keyed by (length, rho-column).
  using Key = std::pair<std::int64_t, std::vector<std::int64_t>>;
  std::map<Key, int> need;
  for (int j = 0; j < cand.n(); ++j)
    ++need[{cand.lengths[j], cand.rho_column(j)}];

  std::map<Key, std::vector<int>> available;
  for (int k = 0; k < km.blocks.count(); ++k) {
    Key key{km.blocks.length_of(k), km.columns[k]};
    if (need.contains(key)) available[key].push_back(k);
  }

  std::vector<detail::Bucket> buckets;
  for (const auto& [key, cnt] : need) {
    auto it = available.find(key);
    if (it == available.end() ||
        static_cast<int>(it->second.size()) < cnt)
      return {};  // some required column is not realizable
    buckets.push_back({it->second, cnt});
  }
  // Tightest bucket first; ties broken by first orbit id for determinism.
  std::sort(buckets.begin(), buckets.end(), [](const auto& a, const auto& b) {
    auto slack_a = a.orbit_ids.size() - std::size_t(a.need);
    auto slack_b = b.orbit_ids.size() - std::size_t(b.need);
    if (slack_a != slack_b) return slack_a < slack_b;
    return a.orbit_ids < b.orbit_ids;
  });

  SearchStats stats;
  std::vector<std::vector<int>> selections;
  detail::OrbitSelection(km, std::move(buckets), limit, stats, selections).run();
  std::sort(selections.begin(), selections.end());

  std::vector<DesignInstance> out;
  out.reserve(selections.size());
  for (auto& sel : selections) {
    DesignInstance d{km.params, sel, {}};
    for (int k : sel)
      for (int sid : km.blocks.orbits[k])
        d.blocks.push_back(km.blocks.spaces[sid]);
    std::sort(d.blocks.begin(), d.blocks.end());
    out.push_back(std::move(d));
  }
  if (stats_out) *stats_out = stats;
  return out;
}

struct VerifyViolation {
  std::string what;
  Subspace where;          // offending subspace (empty for count mismatches)
  std::int64_t expected = 0;
  std::int64_t actual = 0;
};

struct VerifyReport {
  bool valid = false;
  std::vector<VerifyViolation> violations;
};

/// Full design check by brute force: the blocks are distinct k-spaces, there
/// are b of them, every 2-space lies in exactly lambda2 of them and every
/// point in exactly lambda1.
inline VerifyReport verify_design(const DesignParams& params,
                                  const std::vector<Subspace>& blocks,
                                  std::int64_t limit = 5'000'000) {
  const FieldSpec& f = params.spec;
  VerifyReport rep;
  for (const auto& blk : blocks)
    if (blk.v != f.v || blk.dim != params.k)
      rep.violations.push_back({"block is not a k-space", blk, params.k,
                                blk.dim});
  if (!rep.violations.empty()) {
    rep.valid = false;
    return rep;  // coverage counts would be meaningless
  }
  std::set<Subspace> distinct(blocks.begin(), blocks.end());
  if (static_cast<std::int64_t>(distinct.size()) !=
      static_cast<std::int64_t>(blocks.size()))
    rep.violations.push_back({"duplicate blocks", {},
                              static_cast<std::int64_t>(blocks.size()),
                              static_cast<std::int64_t>(distinct.size())});
  if (static_cast<std::int64_t>(blocks.size()) != params.b)
    rep.violations.push_back({"block count", {}, params.b,
                              static_cast<std::int64_t>(blocks.size())});

  for_each_subspace(f, 2, [&](const Subspace& t) {
    Vec r0 = t.row(0), r1 = t.row(1);
    std::int64_t c = 0;
    for (const auto& blk : blocks)
      if (contains(f, blk, r0) && contains(f, blk, r1)) ++c;
    if (c != params.lambda2)
      rep.violations.push_back({"2-space coverage", t, params.lambda2, c});
  });
  for (const Vec& p : all_points(f, limit)) {
    std::int64_t c = 0;
    for (const auto& blk : blocks)
      if (contains(f, blk, p)) ++c;
    if (c != params.lambda1) {
      Subspace s = rref(f, {p});
      rep.violations.push_back({"point coverage", s, params.lambda1, c});
    }
  }
  rep.valid = rep.violations.empty();
  return rep;
}

/// Tactical decomposition matrix induced by the group on an actual block
/// set. Throws unless the group maps the block set to itself. Every
/// incidence count is recomputed from every class member, so the result is
/// certified constant on classes.
inline TacticalMatrix induced_matrix(const MatrixGroup& g,
                                     const PointOrbitPartition& points,
                                     const std::vector<Subspace>& blocks) {
  const FieldSpec& f = g.spec;
  std::vector<Subspace> sorted = blocks;
  std::sort(sorted.begin(), sorted.end());
  auto block_id = [&](const Subspace& s) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), s);
    if (it == sorted.end() || !(*it == s)) return -1;
    return static_cast<int>(it - sorted.begin());
  };

  const int nb = static_cast<int>(sorted.size());
  auto image = [&](int id, int gi) {
    Subspace img = apply(f, sorted[id], g.generators[gi]);
    int to = block_id(img);
    if (to < 0)
      throw InputError("the group does not preserve the block set");
    return to;
  };
  auto [orbits, orbit_of] = detail::orbit_sweep(
      nb, static_cast<int>(g.generators.size()), image);

  const int m = points.count();
  const int n = static_cast<int>(orbits.size());
  TacticalMatrix mat;
  mat.sizes = points.sizes();
  mat.lengths.resize(n);
  for (int j = 0; j < n; ++j)
    mat.lengths[j] = static_cast<std::int64_t>(orbits[j].size());
  mat.rho.assign(std::size_t(m) * n, 0);
  mat.kappa.assign(std::size_t(m) * n, 0);

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      std::int64_t rho = -1;
      for (int pid : points.orbits[i]) {
        std::int64_t c = 0;
        for (int bid : orbits[j])
          if (contains(f, sorted[bid], points.points[pid])) ++c;
        if (rho < 0)
          rho = c;
        else if (rho != c)
          throw DataError("induced decomposition is not tactical over the "
                          "point classes");
      }
      std::int64_t kappa = -1;
      for (int bid : orbits[j]) {
        std::int64_t c = 0;
        for (int pid : points.orbits[i])
          if (contains(f, sorted[bid], points.points[pid])) ++c;
        if (kappa < 0)
          kappa = c;
        else if (kappa != c)
          throw DataError("induced decomposition is not tactical over the "
                          "block classes");
      }
      mat.rho[std::size_t(i) * n + j] = rho;
      mat.kappa[std::size_t(i) * n + j] = kappa;
    }
  return mat;
}

}  // namespace qdes
