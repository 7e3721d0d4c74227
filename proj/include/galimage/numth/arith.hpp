#pragma once

#include <vector>

#include "galimage/numth/factor.hpp"
#include "galimage/numth/modular.hpp"

namespace galimage {

inline u64 euler_phi(u64 m) {
  require(m >= 1, "euler_phi: m must be positive");
  u64 phi = m;
  for (auto [p, e] : factor_u64(m)) phi = phi / p * (p - 1);
  return phi;
}

/// Least e >= 1 with a^e = 1 (mod m). Throws when gcd(a, m) != 1.
inline u64 multiplicative_order(i64 a, u64 m) {
  require(m >= 1, "multiplicative_order: modulus must be positive");
  const u64 x = reduce(a, m);
  require(std::gcd(x, m) == 1 || m == 1, "multiplicative_order: gcd(a, m) != 1");
  if (m <= 2) return 1;
  u64 order = euler_phi(m);
  for (auto [q, e] : factor_u64(order)) {
    for (unsigned i = 0; i < e && order % q == 0; ++i) {
      if (mod_pow(x, order / q, m) != 1) break;
      order /= q;
    }
  }
  return order;
}

/// True when (Z/m)^* is cyclic: m in {1, 2, 4, p^k, 2p^k} with p odd.
inline bool has_primitive_root(u64 m) {
  if (m == 0) return false;
  if (m <= 4) return true;
  if (m % 2 == 0) m /= 2;
  if (m % 2 == 0) return false;
  return factor_u64(m).size() == 1;
}

inline bool is_primitive_root(i64 a, u64 m) {
  require(has_primitive_root(m), "is_primitive_root: (Z/m)^* is not cyclic");
  require(std::gcd(reduce(a, m), m) == 1 || m == 1, "is_primitive_root: gcd(a, m) != 1");
  return multiplicative_order(a, m) == euler_phi(m);
}

/// Legendre symbol (a/p) for an odd prime p.
inline int quadratic_residue_symbol(i64 a, u64 p) {
  require(p > 2 && is_prime(p), "quadratic_residue_symbol: p must be an odd prime");
  u64 x = reduce(a, p);
  if (x == 0) return 0;
  return mod_pow(x, (p - 1) / 2, p) == 1 ? 1 : -1;
}

/// Discrete logarithm of `value` to base `generator` in the cyclic group (Z/m)^*,
/// by Pohlig-Hellman over the factorization of phi(m).
inline u64 discrete_log(u64 generator, u64 value, u64 m) {
  require(std::gcd(value % m, m) == 1, "discrete_log: value not a unit");
  const u64 n = euler_phi(m);
  u64 result = 0, modulus = 1;
  for (auto [q, e] : factor_u64(n)) {
    const u64 qe = ipow(q, e);
    const u64 g0 = mod_pow(generator, n / qe, m);  // order q^e
    const u64 h0 = mod_pow(value, n / qe, m);
    const u64 gamma = mod_pow(g0, qe / q, m);  // order q
    u64 x = 0, qk = 1;
    for (unsigned k = 0; k < e; ++k) {
      // h_k = (g0^{-x} h0)^{q^{e-1-k}}
      const u64 gx_inv = inv_mod(mod_pow(g0, x, m), m);
      const u64 hk = mod_pow(mul_mod(gx_inv, h0, m), qe / qk / q, m);
      u64 d = 0, acc = 1;
      while (acc != hk) {
        acc = mul_mod(acc, gamma, m);
        ++d;
        require(d < q, "discrete_log: value outside the generated subgroup");
      }
      x += d * qk;
      qk *= q;
    }
    // combine x mod qe with result mod modulus (CRT, coprime moduli)
    const u64 t = mul_mod(reduce(static_cast<i64>(x) - static_cast<i64>(result % qe), qe),
                          inv_mod(modulus % qe, qe), qe);
    result += modulus * t;
    modulus *= qe;
  }
  return result % n;
}

}  // namespace galimage
