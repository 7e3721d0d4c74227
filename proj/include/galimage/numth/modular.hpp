#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <utility>

#include "galimage/error.hpp"

namespace galimage {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;
using BigInt = boost::multiprecision::cpp_int;

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 add_mod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  if (s >= m || s < a) s -= m;
  return s;
}

/// Least non-negative residue of a (possibly negative) integer.
inline u64 reduce(i64 a, u64 m) {
  i64 r = a % static_cast<i64>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

/// base^exp mod m for m >= 1; mod_pow(x, 0, m) is 1 mod m.
inline u64 mod_pow(u64 base, u64 exp, u64 m) {
  require(m >= 1, "mod_pow: modulus must be positive");
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

inline u64 mod_pow_signed(i64 base, u64 exp, u64 m) { return mod_pow(reduce(base, m), exp, m); }

inline BigInt mod_pow(const BigInt& base, const BigInt& exp, const BigInt& m) {
  require(m >= 1, "mod_pow: modulus must be positive");
  if (m == 1) return 0;
  BigInt b = base % m;
  if (b < 0) b += m;
  return boost::multiprecision::powm(b, exp, m);
}

/// Inverse of a modulo m; throws when gcd(a, m) != 1.
inline u64 inv_mod(u64 a, u64 m) {
  i64 t = 0, new_t = 1;
  i64 r = static_cast<i64>(m), new_r = static_cast<i64>(a % m);
  while (new_r != 0) {
    i64 q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  require(r == 1, "inv_mod: element is not invertible");
  return reduce(t, m);
}

/// Extended gcd: returns g = gcd(a, b) >= 0 and x, y with a*x + b*y = g.
inline i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
  i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    i64 q = old_r / r;
    old_r = std::exchange(r, old_r - q * r);
    old_s = std::exchange(s, old_s - q * s);
    old_t = std::exchange(t, old_t - q * t);
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  x = old_s;
  y = old_t;
  return old_r;
}

inline u64 ipow(u64 base, unsigned exp) {
  u64 r = 1;
  while (exp--) r *= base;
  return r;
}

inline BigInt big_pow(u64 base, u64 exp) { return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exp)); }

}  // namespace galimage
