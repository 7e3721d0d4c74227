#pragma once

#include <numeric>

#include "galimage/numth/arith.hpp"

namespace galimage::modsym {

/// [SL2(Z) : Gamma0(N)] = N prod_{p | N} (1 + 1/p).
inline u64 gamma0_index(u64 N) {
  require(N >= 1, "gamma0_index: N must be positive");
  u64 mu = N;
  for (auto [p, e] : factor_u64(N)) mu = mu / p * (p + 1);
  return mu;
}

/// Number of elliptic points of order 2.
inline u64 elliptic_points_2(u64 N) {
  if (N % 4 == 0) return 0;
  u64 nu = 1;
  for (auto [p, e] : factor_u64(N)) {
    if (p == 2) continue;
    nu *= (p % 4 == 1) ? 2 : 0;
  }
  return nu;
}

/// Number of elliptic points of order 3.
inline u64 elliptic_points_3(u64 N) {
  if (N % 9 == 0) return 0;
  u64 nu = 1;
  for (auto [p, e] : factor_u64(N)) {
    if (p == 3) continue;
    nu *= (p % 3 == 1) ? 2 : 0;
  }
  return nu;
}

/// Number of cusps of Gamma0(N): sum over d | N of phi(gcd(d, N/d)).
inline u64 cusp_count(u64 N) {
  require(N >= 1, "cusp_count: N must be positive");
  u64 total = 0;
  for (u64 d = 1; d * d <= N; ++d) {
    if (N % d != 0) continue;
    total += euler_phi(std::gcd(d, N / d));
    if (d * d != N) total += euler_phi(std::gcd(N / d, d));
  }
  return total;
}

/// Genus of X0(N) from the index, elliptic and cusp counts.
inline u64 genus_X0(u64 N) {
  const i64 twelve_g = 12 + static_cast<i64>(gamma0_index(N)) - 3 * static_cast<i64>(elliptic_points_2(N)) -
                       4 * static_cast<i64>(elliptic_points_3(N)) - 6 * static_cast<i64>(cusp_count(N));
  return static_cast<u64>(twelve_g / 12);
}

/// Weight-2 Sturm bound ceil(mu / 6).
inline u64 sturm_bound(u64 N) { return (gamma0_index(N) + 5) / 6; }

/// dim S_2(Gamma0(N))^new = sum over M | N of beta(N/M) genus(M), with beta multiplicative,
/// beta(p) = -2, beta(p^2) = 1, beta(p^k) = 0 for k >= 3.
inline u64 new_dimension(u64 N) {
  i64 total = 0;
  for (u64 d = 1; d <= N; ++d) {
    if (N % d != 0) continue;
    i64 beta = 1;
    for (auto [p, e] : factor_u64(d)) beta *= (e == 1) ? -2 : (e == 2 ? 1 : 0);
    total += beta * static_cast<i64>(genus_X0(N / d));
  }
  return static_cast<u64>(total);
}

}  // namespace galimage::modsym
