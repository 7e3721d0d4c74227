#pragma once

#include <algorithm>
#include <limits>
#include <random>
#include <vector>

#include "galimage/numth/modular.hpp"

namespace galimage {

enum class Primality { composite, prime, probable_prime };

namespace detail {

inline const std::vector<u64>& small_primes(u64 limit = 1'000'000) {
  static const std::vector<u64> primes = [] {
    constexpr u64 bound = 1'000'000;
    std::vector<bool> composite(bound + 1, false);
    std::vector<u64> out;
    for (u64 i = 2; i <= bound; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (u64 j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return out;
  }();
  require(limit <= 1'000'000, "small_primes: limit above sieve bound");
  return primes;
}

inline bool miller_rabin_round(u64 n, u64 a, u64 d, unsigned s) {
  u64 x = mod_pow(a % n, d, n);
  if (x == 1 || x == n - 1 || x == 0) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

inline bool miller_rabin_round(const BigInt& n, const BigInt& a, const BigInt& d, unsigned s) {
  BigInt x = boost::multiprecision::powm(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace detail

/// Deterministic for all 64-bit inputs (first twelve primes as witnesses).
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (!detail::miller_rabin_round(n, a, d, s)) return false;
  }
  return true;
}

/// Deterministic below 2^64; above that, `rounds` Miller-Rabin rounds with a fixed seed.
inline Primality primality(const BigInt& n, int rounds = 64) {
  if (n < 2) return Primality::composite;
  if (n <= std::numeric_limits<u64>::max()) {
    return is_prime(static_cast<u64>(n)) ? Primality::prime : Primality::composite;
  }
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return Primality::composite;
  }
  BigInt d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  std::mt19937_64 rng(0x5eed'0f'ca11ULL);
  const BigInt span = n - 3;
  for (int i = 0; i < rounds; ++i) {
    BigInt a = 0;
    for (int limb = 0; limb < 8; ++limb) a = (a << 64) + rng();
    a = a % span + 2;
    if (!detail::miller_rabin_round(n, a, d, s)) return Primality::composite;
  }
  return Primality::probable_prime;
}

struct PrimePower {
  BigInt prime;
  unsigned exponent = 0;
  bool probable = false;  // passed only the probabilistic test

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct FactorOptions {
  u64 trial_limit = 1'000'000;
  u64 rho_iterations = 1u << 18;  // per attempt, for operands above 64 bits
  int rho_attempts = 6;
  int primality_rounds = 64;
};

/// Prime factorization, possibly partial: n = prod(prime^exponent) * prod(cofactors).
struct Factorization {
  std::vector<PrimePower> factors;
  std::vector<BigInt> cofactors;  // composite parts the rho budget could not split

  bool complete() const { return cofactors.empty(); }
  bool has_probable_primes() const {
    return std::any_of(factors.begin(), factors.end(), [](const PrimePower& f) { return f.probable; });
  }
  BigInt product() const {
    BigInt r = 1;
    for (const auto& f : factors) r *= boost::multiprecision::pow(f.prime, f.exponent);
    for (const auto& c : cofactors) r *= c;
    return r;
  }
  std::vector<BigInt> primes() const {
    std::vector<BigInt> out;
    for (const auto& f : factors) out.push_back(f.prime);
    return out;
  }
};

namespace detail {

inline u64 rho_u64(u64 n, u64 c) {
  // Brent's cycle detection with batched gcds.
  auto f = [&](u64 x) { return add_mod(mul_mod(x, x, n), c, n); };
  u64 y = 2, g = 1, q = 1, x = 0, ys = 0;
  u64 r = 1;
  constexpr u64 m = 128;
  while (g == 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) y = f(y);
    u64 k = 0;
    while (k < r && g == 1) {
      ys = y;
      for (u64 i = 0; i < std::min(m, r - k); ++i) {
        y = f(y);
        q = mul_mod(q, x > y ? x - y : y - x, n);
      }
      g = std::gcd(q, n);
      k += m;
    }
    r <<= 1;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

inline void split_u64(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  for (u64 p : {2, 3, 5, 7}) {
    if (n % p == 0) {
      out.push_back(p);
      split_u64(n / p, out);
      return;
    }
  }
  for (u64 c = 1;; ++c) {
    u64 d = rho_u64(n, c);
    if (d != n && d != 1) {
      split_u64(d, out);
      split_u64(n / d, out);
      return;
    }
  }
}

/// Returns a nontrivial divisor or 0 when the iteration budget runs out.
inline BigInt rho_big(const BigInt& n, u64 c, u64 budget) {
  BigInt y = 2, x, ys, q = 1, g = 1;
  u64 r = 1, spent = 0;
  constexpr u64 m = 64;
  auto f = [&](const BigInt& v) { return (v * v + c) % n; };
  while (g == 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) y = f(y);
    u64 k = 0;
    while (k < r && g == 1) {
      ys = y;
      for (u64 i = 0; i < std::min(m, r - k); ++i) {
        y = f(y);
        q = q * (x > y ? x - y : y - x) % n;
      }
      g = boost::multiprecision::gcd(q, n);
      k += m;
      spent += m;
      if (spent > budget && g == 1) return 0;
    }
    r <<= 1;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = boost::multiprecision::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g == n ? BigInt(0) : g;
}

}  // namespace detail

/// Complete factorization of a 64-bit integer as sorted (prime, exponent) pairs.
inline std::vector<std::pair<u64, unsigned>> factor_u64(u64 n) {
  require(n >= 1, "factor_u64: n must be positive");
  std::vector<u64> primes;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  detail::split_u64(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 p : primes) {
    if (!out.empty() && out.back().first == p) {
      ++out.back().second;
    } else {
      out.emplace_back(p, 1);
    }
  }
  return out;
}

/// Trial division to `trial_limit`, then Pollard-Brent rho. Parts that survive the
/// rho budget are returned as composite cofactors instead of looping forever.
inline Factorization factorize(const BigInt& input, const FactorOptions& opts = {}) {
  require(input >= 1, "factorize: n must be positive");
  Factorization out;
  BigInt n = input;
  std::vector<std::pair<BigInt, bool>> found;  // (prime, probable)

  for (u64 p : detail::small_primes()) {
    if (p > opts.trial_limit) break;
    if (BigInt(p) * p > n) break;
    while (n % p == 0) {
      found.emplace_back(BigInt(p), false);
      n /= p;
    }
  }

  std::vector<BigInt> stack;
  if (n > 1) stack.push_back(n);
  while (!stack.empty()) {
    BigInt m = stack.back();
    stack.pop_back();
    if (m <= std::numeric_limits<u64>::max()) {
      std::vector<u64> ps;
      detail::split_u64(static_cast<u64>(m), ps);
      for (u64 p : ps) found.emplace_back(BigInt(p), false);
      continue;
    }
    Primality pr = primality(m, opts.primality_rounds);
    if (pr != Primality::composite) {
      found.emplace_back(m, pr == Primality::probable_prime);
      continue;
    }
    BigInt d = 0;
    for (int attempt = 0; attempt < opts.rho_attempts && d == 0; ++attempt) {
      d = detail::rho_big(m, 1 + static_cast<u64>(attempt), opts.rho_iterations);
    }
    if (d == 0) {
      out.cofactors.push_back(m);
    } else {
      stack.push_back(d);
      stack.push_back(m / d);
    }
  }

  std::sort(found.begin(), found.end());
  for (const auto& [p, probable] : found) {
    if (!out.factors.empty() && out.factors.back().prime == p) {
      ++out.factors.back().exponent;
    } else {
      out.factors.push_back({p, 1, probable});
    }
  }
  std::sort(out.cofactors.begin(), out.cofactors.end());
  return out;
}

}  // namespace galimage
