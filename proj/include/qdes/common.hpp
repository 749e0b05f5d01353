// Shared error types, checked 64-bit integer helpers and an exact rational.
// Everything in this library is exact integer arithmetic; any operation that
// could overflow 64 bits goes through the checked_* helpers and throws
// instead of wrapping.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qdes {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input (files, parameters, CLI arguments).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A configured resource cap was exceeded (group size, subspace count, ...).
class LimitError : public Error {
 public:
  using Error::Error;
};

/// Data fed to an operation is internally inconsistent (e.g. a third-point
/// table that no group action could have produced).
class DataError : public Error {
 public:
  using Error::Error;
};

[[noreturn]] inline void throw_overflow(const char* where) {
  throw Error(std::string("integer overflow in ") + where);
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b,
                                const char* where = "addition") {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw_overflow(where);
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b,
                                const char* where = "subtraction") {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw_overflow(where);
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b,
                                const char* where = "multiplication") {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw_overflow(where);
  return r;
}

/// q^e with overflow detection.
inline std::int64_t checked_pow(std::int64_t q, int e,
                                const char* where = "power") {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r = checked_mul(r, q, where);
  return r;
}

/// Exact rational on 64-bit numerator/denominator, always normalized with
/// positive denominator. Intermediate products use 128 bits; results that do
/// not fit back into 64 bits throw.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n) {}  // NOLINT: implicit by design
  Rational(std::int64_t n, std::int64_t d) { *this = make(n, d); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }

  std::int64_t to_int64() const {
    if (den_ != 1) throw Error("rational value is not an integer");
    return num_;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error("rational division by zero");
    return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return !(a == b);
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return !(b < a);
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return !(a < b);
  }

 private:
  using i128 = __int128;

  static Rational make(i128 n, i128 d) {
    if (d == 0) throw Error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    i128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr i128 lo = INT64_MIN, hi = INT64_MAX;
    if (n < lo || n > hi || d > hi) throw_overflow("rational normalization");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace qdes
