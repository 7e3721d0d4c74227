#pragma once

#include <numeric>
#include <vector>

#include "galimage/error.hpp"
#include "galimage/numth/modular.hpp"

namespace galimage::modsym {

/// A cusp num/den in lowest terms with den >= 0; infinity is 1/0.
struct Cusp {
  i64 num = 1;
  i64 den = 0;

  static Cusp make(i64 num, i64 den) {
    require(num != 0 || den != 0, "Cusp: 0/0 is not a cusp");
    const i64 g = std::gcd(num, den);
    num /= g;
    den /= g;
    if (den < 0 || (den == 0 && num < 0)) {
      num = -num;
      den = -den;
    }
    return {num, den};
  }
  static Cusp infinity() { return {1, 0}; }
  bool is_infinity() const { return den == 0; }
  friend bool operator==(const Cusp&, const Cusp&) = default;
};

/// Gamma0(N)-equivalence: p1/q1 ~ p2/q2 iff s1 q2 = s2 q1 mod gcd(q1 q2, N), where s_j p_j = 1 mod q_j.
inline bool cusps_equivalent(const Cusp& x, const Cusp& y, u64 N) {
  auto s_of = [](const Cusp& z) -> i64 {
    if (z.den == 0) return z.num;
    if (z.den == 1) return 0;
    return static_cast<i64>(inv_mod(reduce(z.num, static_cast<u64>(z.den)), static_cast<u64>(z.den)));
  };
  const i128 q1 = x.den, q2 = y.den;
  const u64 g = std::gcd(static_cast<u64>(q1 * q2 % static_cast<i128>(N)), N);
  const i128 lhs = static_cast<i128>(s_of(x)) * q2 - static_cast<i128>(s_of(y)) * q1;
  return lhs % static_cast<i128>(g) == 0;
}

/// Growing list of Gamma0(N)-inequivalent cusp representatives.
class CuspList {
 public:
  explicit CuspList(u64 N) : N_(N) {}

  std::size_t index(const Cusp& c) {
    for (std::size_t i = 0; i < reps_.size(); ++i) {
      if (cusps_equivalent(reps_[i], c, N_)) return i;
    }
    reps_.push_back(c);
    return reps_.size() - 1;
  }
  std::size_t size() const { return reps_.size(); }
  const std::vector<Cusp>& representatives() const { return reps_; }

 private:
  u64 N_;
  std::vector<Cusp> reps_;
};

/// Convergents p_k/q_k of a/b for k = -2, -1, 0, ..., r with p_{-2}/q_{-2} = 0/1, p_{-1}/q_{-1} = 1/0.
inline std::vector<std::pair<i64, i64>> convergents(i64 a, i64 b) {
  require(b > 0, "convergents: denominator must be positive");
  std::vector<std::pair<i64, i64>> out{{0, 1}, {1, 0}};
  while (b != 0) {
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;  // floor
    const i64 r = a - q * b;
    const auto [p1, q1] = out[out.size() - 1];
    const auto [p2, q2] = out[out.size() - 2];
    out.emplace_back(q * p1 + p2, q * q1 + q2);
    a = b;
    b = r;
  }
  return out;
}

}  // namespace galimage::modsym
