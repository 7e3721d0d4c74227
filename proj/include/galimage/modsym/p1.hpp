#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "galimage/error.hpp"
#include "galimage/numth/modular.hpp"

namespace galimage::modsym {

/// P^1(Z/N): pairs (c : d) with gcd(c, d, N) = 1 up to unit scaling. The canonical
/// representative of a class is its lexicographically least member.
class P1List {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  static constexpr u64 max_level = 5000;  // the lookup table has N^2 entries

  explicit P1List(u64 N) : N_(N) {
    require(N >= 1, "P1List: N must be positive");
    require(N <= max_level, "P1List: level exceeds the lookup table limit");
    std::vector<u64> units;
    for (u64 u = 0; u < N; ++u) {
      if (std::gcd(u, N) == 1) units.push_back(u);
    }
    table_.assign(N * N, unset);
    for (u64 c = 0; c < N; ++c) {
      for (u64 d = 0; d < N; ++d) {
        if (std::gcd(std::gcd(c, d), N) != 1 || table_[c * N + d] != unset) continue;
        const auto idx = static_cast<std::uint32_t>(points_.size());
        points_.emplace_back(c, d);
        for (u64 u : units) table_[(u * c % N) * N + (u * d % N)] = idx;
      }
    }
  }

  u64 level() const { return N_; }
  std::size_t size() const { return points_.size(); }
  const std::pair<u64, u64>& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<std::pair<u64, u64>>& points() const { return points_; }

  /// Index of the class of (c : d), or npos when gcd(c, d, N) != 1.
  std::size_t index(i64 c, i64 d) const {
    const auto v = table_[reduce(c, N_) * N_ + reduce(d, N_)];
    return v == unset ? npos : v;
  }

  /// (c : d) sigma = (d : -c)
  std::size_t apply_s(std::size_t i) const {
    const auto [c, d] = points_[i];
    return index(static_cast<i64>(d), -static_cast<i64>(c));
  }
  /// (c : d) tau = (d : -c - d)
  std::size_t apply_t(std::size_t i) const {
    const auto [c, d] = points_[i];
    return index(static_cast<i64>(d), -static_cast<i64>(c) - static_cast<i64>(d));
  }

 private:
  static constexpr std::uint32_t unset = std::numeric_limits<std::uint32_t>::max();

  u64 N_;
  std::vector<std::pair<u64, u64>> points_;
  std::vector<std::uint32_t> table_;
};

inline P1List p1_list(u64 N) { return P1List(N); }

/// Integer 2x2 matrix [a b; c d].
struct Mat2 {
  i64 a, b, c, d;
  i64 det() const { return a * d - b * c; }
};

/// A matrix in SL2(Z) whose bottom row reduces to (c, d) mod N; requires gcd(c, d, N) = 1.
inline Mat2 lift_to_sl2z(u64 c, u64 d, u64 N) {
  require(std::gcd(std::gcd(c, d), N) == 1, "lift_to_sl2z: gcd(c, d, N) != 1");
  i64 cc = static_cast<i64>(c % N);
  i64 dd = static_cast<i64>(d % N);
  const i64 n = static_cast<i64>(N);
  if (cc == 0) cc = n;
  while (std::gcd(cc, dd) != 1) dd += n;
  i64 x = 0, y = 0;
  ext_gcd(dd, cc, x, y);  // x dd + y cc = 1
  return {x, -y, cc, dd};
}

}  // namespace galimage::modsym
