// Parameter arithmetic and admissibility for 2-(v,k,lambda2;q) designs over
// finite fields.
#pragma once

#include <cstdint>
#include <string>

#include "qdes/common.hpp"
#include "qdes/field.hpp"

namespace qdes {

/// Divisibility failure when deriving lambda1 or the block count. Carries the
/// remainder of each failed division (zero for the one that succeeded).
class InadmissibleError : public Error {
 public:
  InadmissibleError(std::int64_t lambda1_rem, std::int64_t b_rem)
      : Error("inadmissible design parameters (lambda1 remainder " +
              std::to_string(lambda1_rem) + ", block count remainder " +
              std::to_string(b_rem) + ")"),
        lambda1_remainder(lambda1_rem),
        b_remainder(b_rem) {}

  std::int64_t lambda1_remainder = 0;
  std::int64_t b_remainder = 0;
};

/// Parameters of a 2-(v,k,lambda2;q) design together with the derived
/// values: lambda1, the block count b, and phi = min(lambda2, [v-3 k-3]_q),
/// the largest possible number of blocks containing a fixed 3-space.
struct DesignParams {
  FieldSpec spec;
  int k = 2;
  std::int64_t lambda2 = 1;
  std::int64_t lambda1 = 0;
  std::int64_t b = 0;
  std::int64_t phi = 0;

  int v() const { return spec.v; }
  int q() const { return spec.q; }

  /// Number of points of a block, [k 1]_q.
  std::int64_t block_point_count() const {
    return gauss_binomial(k, 1, spec.q);
  }
};

/// Computes the derived parameters, throwing InadmissibleError if lambda1 or
/// the block count is not an integer.
inline DesignParams derive_params(int v, int k, std::int64_t lambda2, int q) {
  FieldSpec spec(q, v);
  if (k < 2) throw InputError("block dimension must be at least 2");
  if (k >= v) throw InputError("block dimension must be less than v");
  if (lambda2 < 1) throw InputError("lambda2 must be positive");

  std::int64_t l1_num = checked_mul(lambda2, gauss_binomial(v - 1, 1, q));
  std::int64_t l1_den = gauss_binomial(k - 1, 1, q);
  std::int64_t b_num = checked_mul(lambda2, gauss_binomial(v, 2, q));
  std::int64_t b_den = gauss_binomial(k, 2, q);
  std::int64_t l1_rem = l1_num % l1_den;
  std::int64_t b_rem = b_num % b_den;
  if (l1_rem != 0 || b_rem != 0) throw InadmissibleError(l1_rem, b_rem);

  DesignParams p{spec, k, lambda2, l1_num / l1_den, b_num / b_den, 0};
  std::int64_t cap = (k >= 3) ? gauss_binomial(v - 3, k - 3, q) : 0;
  p.phi = std::min(lambda2, cap);
  return p;
}

/// lambda_s for 0 <= s <= 2 as an exact rational: the number of blocks
/// containing a fixed s-space (lambda_0 equals the block count).
inline Rational lambda_s(const DesignParams& p, int s) {
  if (s < 0 || s > 2) throw InputError("s out of range for lambda_s");
  Rational num(gauss_binomial(p.v() - s, 2 - s, p.q()));
  Rational den(gauss_binomial(p.k - s, 2 - s, p.q()));
  return Rational(p.lambda2) * num / den;
}

}  // namespace qdes
