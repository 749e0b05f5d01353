// Exhaustive enumeration of tactical decomposition matrices.
//
// Given the point class sizes and a block class length profile, a candidate
// matrix [rho_ij] (blocks of class j through a point of class i) must
// satisfy, together with the dual matrix [kappa_ij] (points of class i in a
// block of class j):
//
//   (row)   sum_j rho_ij = lambda1                       for every i
//   (col)   sum_i kappa_ij = [k 1]_q                     for every j
//   (dual)  |class_i| * rho_ij = |block class_j| * kappa_ij, kappa integral
//   (quad)  sum_j rho_lj kappa_rj = lambda2 * |class_r|            (l != r)
//                                 = lambda1 + lambda2*(|class_r|-1) (l = r)
//
// The search walks column by column over a precomputed alphabet of feasible
// columns and keeps columns of equal block length in non-increasing
// lexicographic order, so exactly one representative per class under
// permutations of equal-length columns is produced, with no post-hoc dedup.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qdes/params.hpp"

namespace qdes {

/// Multiset of block class lengths, kept in non-increasing order.
struct BlockOrbitProfile {
  std::vector<std::int64_t> lengths;

  int n() const { return static_cast<int>(lengths.size()); }
  friend bool operator==(const BlockOrbitProfile&,
                         const BlockOrbitProfile&) = default;
};

struct ProfileOptions {
  std::optional<int> block_class_count;  // fix n
  bool full_length_only = false;         // every length equal to |G|
};

/// All multisets of divisors of the group order summing to the block count,
/// in a deterministic order.
inline std::vector<BlockOrbitProfile> candidate_profiles(
    const DesignParams& params, std::int64_t group_order,
    ProfileOptions opt = {}, std::int64_t max_profiles = 200'000) {
  if (group_order < 1) throw InputError("group order must be positive");
  std::vector<std::int64_t> divisors;
  for (std::int64_t d = 1; d <= group_order; ++d)
    if (group_order % d == 0) divisors.push_back(d);
  std::sort(divisors.rbegin(), divisors.rend());
  if (opt.full_length_only) divisors.assign(1, group_order);

  std::vector<BlockOrbitProfile> out;
  std::vector<std::int64_t> cur;
  auto recurse = [&](auto&& self, std::size_t di, std::int64_t left) -> void {
    if (left == 0) {
      if (!opt.block_class_count ||
          static_cast<int>(cur.size()) == *opt.block_class_count) {
        if (static_cast<std::int64_t>(out.size()) >= max_profiles)
          throw LimitError("too many block class profiles; restrict the search");
        out.push_back({cur});
      }
      return;
    }
    if (di >= divisors.size()) return;
    std::int64_t d = divisors[di];
    // Try every multiplicity of d, largest first.
    std::int64_t max_count = left / d;
    if (opt.block_class_count)
      max_count = std::min<std::int64_t>(
          max_count, *opt.block_class_count - static_cast<int>(cur.size()));
    for (std::int64_t c = max_count; c >= 0; --c) {
      cur.insert(cur.end(), c, d);
      self(self, di + 1, left - c * d);
      cur.resize(cur.size() - c);
    }
  };
  recurse(recurse, 0, params.b);
  return out;
}

/// Block class profiles realizable as sub-multisets of the actual orbit
/// lengths of the k-spaces (used when the orbit structure is known).
inline std::vector<BlockOrbitProfile> profiles_from_orbit_lengths(
    const std::vector<std::int64_t>& orbit_lengths, std::int64_t b,
    std::int64_t max_profiles = 200'000) {
  std::vector<std::pair<std::int64_t, std::int64_t>> avail;  // length, count
  for (std::int64_t len : orbit_lengths) {
    auto it = std::find_if(avail.begin(), avail.end(),
                           [&](auto& p) { return p.first == len; });
    if (it == avail.end())
      avail.emplace_back(len, 1);
    else
      ++it->second;
  }
  std::sort(avail.rbegin(), avail.rend());

  std::vector<BlockOrbitProfile> out;
  std::vector<std::int64_t> cur;
  auto recurse = [&](auto&& self, std::size_t i, std::int64_t left) -> void {
    if (left == 0) {
      if (static_cast<std::int64_t>(out.size()) >= max_profiles)
        throw LimitError("too many block class profiles; restrict the search");
      out.push_back({cur});
      return;
    }
    if (i >= avail.size()) return;
    auto [len, count] = avail[i];
    std::int64_t max_count = std::min(count, left / len);
    for (std::int64_t c = max_count; c >= 0; --c) {
      cur.insert(cur.end(), c, len);
      self(self, i + 1, left - c * len);
      cur.resize(cur.size() - c);
    }
  };
  recurse(recurse, 0, b);
  return out;
}

/// An m x n tactical decomposition matrix candidate: rho, the derived kappa,
/// the point class sizes and the block class lengths it was built against.
struct TacticalMatrix {
  std::vector<std::int64_t> sizes;    // m point class sizes
  std::vector<std::int64_t> lengths;  // n block class lengths
  std::vector<std::int64_t> rho;      // m*n row-major
  std::vector<std::int64_t> kappa;    // m*n row-major

  int m() const { return static_cast<int>(sizes.size()); }
  int n() const { return static_cast<int>(lengths.size()); }
  std::int64_t rho_at(int i, int j) const { return rho[std::size_t(i) * n() + j]; }
  std::int64_t kappa_at(int i, int j) const {
    return kappa[std::size_t(i) * n() + j];
  }

  std::vector<std::int64_t> rho_column(int j) const {
    std::vector<std::int64_t> c(m());
    for (int i = 0; i < m(); ++i) c[i] = rho_at(i, j);
    return c;
  }

  friend bool operator==(const TacticalMatrix&,
                         const TacticalMatrix&) = default;
};

/// Reorders columns into the canonical form the enumerator emits: lengths
/// non-increasing, and within runs of equal length columns non-increasing
/// lexicographically on rho.
inline TacticalMatrix canonical_columns(const TacticalMatrix& in) {
  const int m = in.m(), n = in.n();
  std::vector<int> idx(n);
  for (int j = 0; j < n; ++j) idx[j] = j;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (in.lengths[a] != in.lengths[b]) return in.lengths[a] > in.lengths[b];
    for (int i = 0; i < m; ++i)
      if (in.rho_at(i, a) != in.rho_at(i, b))
        return in.rho_at(i, a) > in.rho_at(i, b);
    return false;
  });
  TacticalMatrix out;
  out.sizes = in.sizes;
  out.lengths.resize(n);
  out.rho.resize(in.rho.size());
  out.kappa.resize(in.kappa.size());
  for (int j = 0; j < n; ++j) {
    out.lengths[j] = in.lengths[idx[j]];
    for (int i = 0; i < m; ++i) {
      out.rho[std::size_t(i) * n + j] = in.rho_at(i, idx[j]);
      out.kappa[std::size_t(i) * n + j] = in.kappa_at(i, idx[j]);
    }
  }
  return out;
}

namespace detail {

// All permutations of row indices that only move rows between point classes
// of equal size (those are interchangeable for the equation system). The
// count is the product of factorials of the size multiplicities.
inline std::vector<std::vector<int>> size_preserving_row_perms(
    const std::vector<std::int64_t>& sizes, std::int64_t cap = 40'320) {
  const int m = static_cast<int>(sizes.size());
  std::vector<std::vector<int>> blocks;  // indices per distinct size
  for (int i = 0; i < m; ++i) {
    bool placed = false;
    for (auto& blk : blocks)
      if (sizes[blk[0]] == sizes[i]) {
        blk.push_back(i);
        placed = true;
        break;
      }
    if (!placed) blocks.push_back({i});
  }
  std::int64_t total = 1;
  for (const auto& blk : blocks)
    for (std::size_t f = 2; f <= blk.size(); ++f) {
      total = checked_mul(total, static_cast<std::int64_t>(f));
      if (total > cap)
        throw LimitError("too many interchangeable point classes to "
                         "canonicalize row assignments");
    }

  std::vector<std::vector<std::vector<int>>> block_perms;
  for (const auto& blk : blocks) {
    std::vector<int> perm = blk;
    std::vector<std::vector<int>> perms;
    std::sort(perm.begin(), perm.end());
    do {
      perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    block_perms.push_back(std::move(perms));
  }

  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<std::size_t> pick(blocks.size(), 0);
  while (true) {
    std::vector<int> perm(m);
    for (std::size_t bi = 0; bi < blocks.size(); ++bi)
      for (std::size_t t = 0; t < blocks[bi].size(); ++t)
        perm[blocks[bi][t]] = block_perms[bi][pick[bi]][t];
    out.push_back(std::move(perm));
    int bi = static_cast<int>(blocks.size()) - 1;
    for (; bi >= 0; --bi) {
      if (++pick[bi] < block_perms[bi].size()) break;
      pick[bi] = 0;
    }
    if (bi < 0) break;
  }
  return out;
}

}  // namespace detail

/// Applies a row permutation: row perm[i] of the result is row i of the
/// input. Only size-preserving permutations keep the matrix meaningful.
inline TacticalMatrix permute_rows(const TacticalMatrix& in,
                                   const std::vector<int>& perm) {
  TacticalMatrix out = in;
  const int n = in.n();
  for (int i = 0; i < in.m(); ++i)
    for (int j = 0; j < n; ++j) {
      out.rho[std::size_t(perm[i]) * n + j] = in.rho_at(i, j);
      out.kappa[std::size_t(perm[i]) * n + j] = in.kappa_at(i, j);
    }
  return out;
}

/// The canonical key of a matrix under permutations of equal-size point
/// classes and of equal-length block classes: the lexicographically least
/// column-canonical rho over all size-preserving row assignments.
inline std::vector<std::int64_t> row_class_key(const TacticalMatrix& mat) {
  auto perms = detail::size_preserving_row_perms(mat.sizes);
  std::vector<std::int64_t> best;
  for (const auto& perm : perms) {
    auto rho = canonical_columns(permute_rows(mat, perm)).rho;
    if (best.empty() || rho < best) best = std::move(rho);
  }
  return best;
}

/// All distinct matrices obtained from size-preserving row reassignments,
/// in column-canonical form. Used to recover every possible binding of the
/// matrix rows to concrete point classes after class-level deduplication.
inline std::vector<TacticalMatrix> expand_row_assignments(
    const TacticalMatrix& mat) {
  auto perms = detail::size_preserving_row_perms(mat.sizes);
  std::vector<TacticalMatrix> out;
  for (const auto& perm : perms) {
    TacticalMatrix cand = canonical_columns(permute_rows(mat, perm));
    if (std::find(out.begin(), out.end(), cand) == out.end())
      out.push_back(std::move(cand));
  }
  return out;
}

struct EquationViolation {
  enum class Kind { Shape, Negative, RowSum, ColumnSum, Duality, Quadratic };
  Kind kind;
  int i = -1;  // row / l index, where applicable
  int j = -1;  // column / r index
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;

  std::string describe() const {
    auto name = [&] {
      switch (kind) {
        case Kind::Shape: return "shape";
        case Kind::Negative: return "negative entry";
        case Kind::RowSum: return "row sum";
        case Kind::ColumnSum: return "column sum";
        case Kind::Duality: return "duality";
        case Kind::Quadratic: return "quadratic";
      }
      return "?";
    }();
    return std::string(name) + " at (" + std::to_string(i + 1) + "," +
           std::to_string(j + 1) + "): " + std::to_string(lhs) +
           " != " + std::to_string(rhs);
  }
};

/// Verifies every constraint on an externally supplied matrix and reports
/// each violation with both sides of the failed equation. An empty report
/// means the matrix is a valid candidate.
inline std::vector<EquationViolation> check_equations(
    const DesignParams& params, const TacticalMatrix& mat) {
  using K = EquationViolation::Kind;
  std::vector<EquationViolation> out;
  const int m = mat.m(), n = mat.n();
  if (static_cast<int>(mat.rho.size()) != m * n ||
      static_cast<int>(mat.kappa.size()) != m * n) {
    out.push_back({K::Shape, -1, -1,
                   static_cast<std::int64_t>(mat.rho.size()),
                   static_cast<std::int64_t>(m) * n});
    return out;
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      if (mat.rho_at(i, j) < 0 || mat.kappa_at(i, j) < 0)
        out.push_back({K::Negative, i, j, mat.rho_at(i, j), 0});
      std::int64_t lhs = checked_mul(mat.sizes[i], mat.rho_at(i, j));
      std::int64_t rhs = checked_mul(mat.lengths[j], mat.kappa_at(i, j));
      if (lhs != rhs) out.push_back({K::Duality, i, j, lhs, rhs});
    }
  for (int i = 0; i < m; ++i) {
    std::int64_t s = 0;
    for (int j = 0; j < n; ++j) s = checked_add(s, mat.rho_at(i, j));
    if (s != params.lambda1)
      out.push_back({K::RowSum, i, -1, s, params.lambda1});
  }
  const std::int64_t col_target = params.block_point_count();
  for (int j = 0; j < n; ++j) {
    std::int64_t s = 0;
    for (int i = 0; i < m; ++i) s = checked_add(s, mat.kappa_at(i, j));
    if (s != col_target) out.push_back({K::ColumnSum, -1, j, s, col_target});
  }
  for (int l = 0; l < m; ++l)
    for (int r = 0; r < m; ++r) {
      std::int64_t s = 0;
      for (int j = 0; j < n; ++j)
        s = checked_add(s, checked_mul(mat.rho_at(l, j), mat.kappa_at(r, j)));
      std::int64_t target =
          (l == r) ? checked_add(params.lambda1,
                                 checked_mul(params.lambda2, mat.sizes[r] - 1))
                   : checked_mul(params.lambda2, mat.sizes[r]);
      if (s != target) out.push_back({K::Quadratic, l, r, s, target});
    }
  return out;
}

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t pruned_row_sum = 0;
  std::uint64_t pruned_quadratic = 0;
  std::uint64_t pruned_tail = 0;
  std::uint64_t solutions = 0;

  void merge(const SearchStats& o) {
    nodes += o.nodes;
    pruned_row_sum += o.pruned_row_sum;
    pruned_quadratic += o.pruned_quadratic;
    pruned_tail += o.pruned_tail;
    solutions += o.solutions;
  }
};

namespace detail {

struct Column {
  std::vector<std::int64_t> rho;
  std::vector<std::int64_t> kappa;
};

// Feasible columns for one block class length: kappa columns summing to
// [k 1]_q whose dual rho entries are integral and within the row budget.
// Sorted by rho, largest first, so a non-decreasing alphabet-index sequence
// is exactly a non-increasing column sequence.
inline std::vector<Column> column_alphabet(
    const DesignParams& params, const std::vector<std::int64_t>& sizes,
    std::int64_t length) {
  const int m = static_cast<int>(sizes.size());
  const std::int64_t col_sum = params.block_point_count();
  std::vector<Column> cols;
  std::vector<std::int64_t> kap(m, 0);
  auto recurse = [&](auto&& self, int i, std::int64_t left) -> void {
    if (i == m - 1) {
      kap[i] = left;
      Column c{std::vector<std::int64_t>(m), kap};
      for (int t = 0; t < m; ++t) {
        std::int64_t prod = checked_mul(length, kap[t]);
        if (prod % sizes[t] != 0) return;
        c.rho[t] = prod / sizes[t];
        if (c.rho[t] > params.lambda1) return;
      }
      cols.push_back(std::move(c));
      return;
    }
    for (std::int64_t v = 0; v <= left; ++v) {
      kap[i] = v;
      self(self, i + 1, left - v);
    }
    kap[i] = 0;
  };
  recurse(recurse, 0, col_sum);
  std::sort(cols.begin(), cols.end(),
            [](const Column& a, const Column& b) { return a.rho > b.rho; });
  return cols;
}

struct EnumeratorContext {
  const DesignParams& params;
  std::vector<std::int64_t> sizes;
  std::vector<std::int64_t> lengths;  // non-increasing
  int m, n;
  std::vector<int> group_of;               // slot -> alphabet group
  std::vector<std::vector<Column>> groups;  // alphabet per distinct length
  std::vector<std::int64_t> quad_target;    // m*m
  // Suffix bounds: best achievable contribution of slots j..n-1.
  std::vector<std::int64_t> max_row_tail;   // (n+1)*m
  std::vector<std::int64_t> max_quad_tail;  // (n+1)*m*m
};

inline EnumeratorContext make_context(const DesignParams& params,
                                      const std::vector<std::int64_t>& sizes,
                                      const BlockOrbitProfile& profile) {
  EnumeratorContext ctx{params, sizes, profile.lengths,
                        static_cast<int>(sizes.size()),
                        static_cast<int>(profile.lengths.size()),
                        {}, {}, {}, {}, {}};
  std::sort(ctx.lengths.rbegin(), ctx.lengths.rend());

  std::vector<std::int64_t> distinct;
  ctx.group_of.resize(ctx.n);
  for (int j = 0; j < ctx.n; ++j) {
    if (distinct.empty() || distinct.back() != ctx.lengths[j]) {
      distinct.push_back(ctx.lengths[j]);
      ctx.groups.push_back(column_alphabet(params, sizes, ctx.lengths[j]));
    }
    ctx.group_of[j] = static_cast<int>(ctx.groups.size()) - 1;
  }

  const int m = ctx.m;
  ctx.quad_target.resize(std::size_t(m) * m);
  for (int l = 0; l < m; ++l)
    for (int r = 0; r < m; ++r)
      ctx.quad_target[std::size_t(l) * m + r] =
          (l == r) ? checked_add(params.lambda1,
                                 checked_mul(params.lambda2, sizes[r] - 1))
                   : checked_mul(params.lambda2, sizes[r]);

  ctx.max_row_tail.assign(std::size_t(ctx.n + 1) * m, 0);
  ctx.max_quad_tail.assign(std::size_t(ctx.n + 1) * m * m, 0);
  for (int j = ctx.n - 1; j >= 0; --j) {
    const auto& alpha = ctx.groups[ctx.group_of[j]];
    for (int i = 0; i < m; ++i) {
      std::int64_t mx = 0;
      for (const auto& c : alpha) mx = std::max(mx, c.rho[i]);
      ctx.max_row_tail[std::size_t(j) * m + i] =
          checked_add(ctx.max_row_tail[std::size_t(j + 1) * m + i], mx);
    }
    for (int l = 0; l < m; ++l)
      for (int r = 0; r < m; ++r) {
        std::int64_t mx = 0;
        for (const auto& c : alpha)
          mx = std::max(mx, checked_mul(c.rho[l], c.kappa[r]));
        std::size_t id = (std::size_t(l) * m + r);
        ctx.max_quad_tail[std::size_t(j) * m * m + id] = checked_add(
            ctx.max_quad_tail[std::size_t(j + 1) * m * m + id], mx);
      }
  }
  return ctx;
}

class ColumnSearch {
 public:
  ColumnSearch(const EnumeratorContext& ctx, SearchStats& stats,
               std::vector<TacticalMatrix>& out)
      : ctx_(ctx), stats_(stats), out_(out),
        row_sum_(ctx.m, 0),
        quad_(std::size_t(ctx.m) * ctx.m, 0),
        chosen_(ctx.n, 0) {}

  // Explore all completions with the column of slot 0 restricted to
  // [first_lo, first_hi); the full search is first_lo = 0, first_hi = |A0|.
  void run(int first_lo, int first_hi) {
    if (ctx_.n == 0) {
      if (complete_ok()) emit();
      return;
    }
    const auto& alpha = ctx_.groups[ctx_.group_of[0]];
    first_hi = std::min<int>(first_hi, static_cast<int>(alpha.size()));
    for (int p = first_lo; p < first_hi; ++p) descend(0, p);
  }

 private:
  bool complete_ok() const {
    for (int i = 0; i < ctx_.m; ++i)
      if (row_sum_[i] != ctx_.params.lambda1) return false;
    for (std::size_t t = 0; t < quad_.size(); ++t)
      if (quad_[t] != ctx_.quad_target[t]) return false;
    return true;
  }

  void emit() {
    TacticalMatrix mat;
    mat.sizes = ctx_.sizes;
    mat.lengths = ctx_.lengths;
    mat.rho.assign(std::size_t(ctx_.m) * ctx_.n, 0);
    mat.kappa.assign(std::size_t(ctx_.m) * ctx_.n, 0);
    for (int j = 0; j < ctx_.n; ++j) {
      const auto& col = ctx_.groups[ctx_.group_of[j]][chosen_[j]];
      for (int i = 0; i < ctx_.m; ++i) {
        mat.rho[std::size_t(i) * ctx_.n + j] = col.rho[i];
        mat.kappa[std::size_t(i) * ctx_.n + j] = col.kappa[i];
      }
    }
    out_.push_back(std::move(mat));
    ++stats_.solutions;
  }

  void descend(int j, int p) {
    ++stats_.nodes;
    const int m = ctx_.m;
    const auto& col = ctx_.groups[ctx_.group_of[j]][p];

    for (int i = 0; i < m; ++i) row_sum_[i] += col.rho[i];
    for (int l = 0; l < m; ++l)
      for (int r = 0; r < m; ++r)
        quad_[std::size_t(l) * m + r] += col.rho[l] * col.kappa[r];
    chosen_[j] = p;

    bool ok = true;
    for (int i = 0; ok && i < m; ++i) {
      if (row_sum_[i] > ctx_.params.lambda1) {
        ok = false;
        ++stats_.pruned_row_sum;
      } else if (row_sum_[i] + ctx_.max_row_tail[std::size_t(j + 1) * m + i] <
                 ctx_.params.lambda1) {
        ok = false;
        ++stats_.pruned_tail;
      }
    }
    for (std::size_t t = 0; ok && t < quad_.size(); ++t) {
      if (quad_[t] > ctx_.quad_target[t]) {
        ok = false;
        ++stats_.pruned_quadratic;
      } else if (quad_[t] + ctx_.max_quad_tail[std::size_t(j + 1) * m * m + t] <
                 ctx_.quad_target[t]) {
        ok = false;
        ++stats_.pruned_tail;
      }
    }

    if (ok) {
      if (j + 1 == ctx_.n) {
        if (complete_ok()) emit();
      } else {
        // Within a run of equal lengths the alphabet index must not
        // decrease, which keeps equal-length columns non-increasing.
        int lo = (ctx_.group_of[j + 1] == ctx_.group_of[j]) ? p : 0;
        int hi = static_cast<int>(ctx_.groups[ctx_.group_of[j + 1]].size());
        for (int np = lo; np < hi; ++np) descend(j + 1, np);
      }
    }

    for (int i = 0; i < m; ++i) row_sum_[i] -= col.rho[i];
    for (int l = 0; l < m; ++l)
      for (int r = 0; r < m; ++r)
        quad_[std::size_t(l) * m + r] -= col.rho[l] * col.kappa[r];
  }

  const EnumeratorContext& ctx_;
  SearchStats& stats_;
  std::vector<TacticalMatrix>& out_;
  std::vector<std::int64_t> row_sum_;
  std::vector<std::int64_t> quad_;
  std::vector<int> chosen_;
};

}  // namespace detail

/// Enumerates every tactical decomposition matrix for the given point class
/// sizes and block class profile, one canonical representative per symmetry
/// class: permutations of equal-length block classes, and (with
/// dedup_row_classes set, the default) permutations of equal-size point
/// classes, which the equation system cannot tell apart. Use
/// expand_row_assignments to recover the concrete row bindings of a class
/// representative. With jobs > 1 the first column's choices are split
/// across worker threads; the merged output is identical to a
/// single-threaded run.
inline std::vector<TacticalMatrix> enumerate_rho(
    const DesignParams& params, const std::vector<std::int64_t>& sizes,
    const BlockOrbitProfile& profile, int jobs = 1,
    SearchStats* stats_out = nullptr, bool dedup_row_classes = true) {
  std::int64_t point_total = 0;
  for (std::int64_t s : sizes) {
    if (s < 1) throw InputError("point class sizes must be positive");
    point_total = checked_add(point_total, s);
  }
  if (point_total != gauss_binomial(params.v(), 1, params.q()))
    throw InputError("point class sizes do not cover the point set");
  std::int64_t len_total = 0;
  for (std::int64_t d : profile.lengths) {
    if (d < 1) throw InputError("block class lengths must be positive");
    len_total = checked_add(len_total, d);
  }
  if (len_total != params.b)
    throw InputError("block class lengths do not sum to the block count");

  auto ctx = detail::make_context(params, sizes, profile);
  SearchStats stats;
  std::vector<TacticalMatrix> out;

  const int first_n = ctx.n == 0 ? 0
                                 : static_cast<int>(ctx.groups[0].size());
  if (jobs <= 1 || first_n <= 1) {
    detail::ColumnSearch(ctx, stats, out).run(0, first_n);
  } else {
    const int workers = std::min(jobs, first_n);
    std::vector<std::vector<TacticalMatrix>> parts(
        static_cast<std::size_t>(first_n));
    std::vector<SearchStats> part_stats(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        for (int p = w; p < first_n; p += workers) {
          detail::ColumnSearch search(ctx, part_stats[w], parts[p]);
          search.run(p, p + 1);
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& s : part_stats) stats.merge(s);
    for (auto& p : parts)
      for (auto& mat : p) out.push_back(std::move(mat));
  }

  if (dedup_row_classes) {
    auto perms = detail::size_preserving_row_perms(sizes);
    if (perms.size() > 1) {
      std::vector<TacticalMatrix> kept;
      for (auto& mat : out) {
        // Emitted matrices are column-canonical; keep exactly the least
        // member of each row-reassignment class.
        bool minimal = true;
        for (const auto& perm : perms) {
          if (canonical_columns(permute_rows(mat, perm)).rho < mat.rho) {
            minimal = false;
            break;
          }
        }
        if (minimal) kept.push_back(std::move(mat));
      }
      out = std::move(kept);
    }
  }

  stats.solutions = out.size();
  if (stats_out) *stats_out = stats;
  return out;
}

}  // namespace qdes
