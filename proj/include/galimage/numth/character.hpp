#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "galimage/numth/arith.hpp"
#include "galimage/numth/galois.hpp"

namespace galimage {

/// Dirichlet character of prime-power modulus t^u (t odd) with values in a finite
/// field, stored as the image of a fixed primitive root g. Evaluation goes through a
/// discrete logarithm, so storage does not grow with the modulus.
class DirichletCharacter {
 public:
  DirichletCharacter(u64 t, unsigned u, u64 generator, FieldElement value_at_generator)
      : t_(t), u_(u), modulus_(ipow(t, u)), generator_(generator), value_(std::move(value_at_generator)) {
    require(t > 2 && is_prime(t), "DirichletCharacter: t must be an odd prime");
    require(u >= 1, "DirichletCharacter: exponent must be positive");
    require(is_primitive_root(static_cast<i64>(generator % modulus_), modulus_),
            "DirichletCharacter: generator is not a primitive root");
    require(!value_.is_zero(), "DirichletCharacter: value at generator must be a unit");
    require(euler_phi(modulus_) % value_.order() == 0,
            "DirichletCharacter: value order must divide phi(modulus)");
  }

  u64 t() const { return t_; }
  unsigned u() const { return u_; }
  u64 modulus() const { return modulus_; }
  u64 generator() const { return generator_; }
  const FieldElement& value_at_generator() const { return value_; }
  const GaloisField& field() const { return value_.field(); }

  u64 order() const { return value_.order(); }

  /// Exponent c with conductor t^c (0 for the trivial character).
  unsigned conductor_exponent() const {
    u64 m = order();
    if (m == 1) return 0;
    unsigned c = 1;
    while (m % t_ == 0) {
      m /= t_;
      ++c;
    }
    return c;
  }
  u64 conductor() const { return ipow(t_, conductor_exponent()); }

  /// psi(a); zero when t divides a.
  FieldElement operator()(i64 a) const {
    const u64 x = reduce(a, modulus_);
    if (x % t_ == 0) return FieldElement(field(), field().zero());
    return value_.pow(discrete_log(generator_ % modulus_, x, modulus_));
  }

  DirichletCharacter inverse() const { return {t_, u_, generator_, value_.inverse()}; }

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.modulus_ == b.modulus_ && a.generator_ == b.generator_ && a.value_ == b.value_;
  }

 private:
  u64 t_;
  unsigned u_;
  u64 modulus_;
  u64 generator_;
  FieldElement value_;
};

/// Least primitive root modulo t^u (t odd prime), used when no generator is supplied.
inline u64 least_primitive_root(u64 m) {
  for (u64 g = 2; g < m; ++g) {
    if (std::gcd(g, m) == 1 && is_primitive_root(static_cast<i64>(g), m)) return g;
  }
  return 1;
}

/// Smallest k such that F_{ell^k} contains the order-th roots of unity.
inline unsigned root_of_unity_degree(u64 ell, u64 order) {
  if (order <= 2) return 1;
  return static_cast<unsigned>(multiplicative_order(static_cast<i64>(ell % order), order));
}

/// Elements of exact multiplicative order `order` in `field`, sorted.
inline std::vector<FieldElement> elements_of_order(const GaloisField& field, u64 order) {
  const u64 n = field.group_order();
  require(order >= 1 && n % order == 0, "elements_of_order: order does not divide the group order");
  const auto gamma = field.primitive_element();
  const auto base = field.pow(gamma, n / order);
  std::vector<FieldElement> out;
  for (u64 j = 1; j <= order; ++j) {
    if (std::gcd(j, order) == 1) out.emplace_back(field, field.pow(base, j));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// All characters of modulus t^u with exact conductor t^u and the given order, valued in
/// the smallest F_{ell^k} holding the order-th roots of unity. The generator defaults to
/// the least primitive root modulo t^u.
inline std::vector<DirichletCharacter> character_of_conductor(u64 t, unsigned u, u64 ell, u64 order,
                                                              u64 generator = 0) {
  require(t > 2 && is_prime(t), "character_of_conductor: t must be an odd prime");
  require(u >= 1, "character_of_conductor: u must be positive");
  require(is_prime(ell) && ell != t, "character_of_conductor: ell must be a prime different from t");
  const u64 modulus = ipow(t, u);
  const u64 phi = euler_phi(modulus);
  require(order >= 1 && phi % order == 0, "character_of_conductor: order must divide phi(t^u)");
  require(order % ipow(t, u - 1) == 0 && order > 1,
          "character_of_conductor: t^(u-1) must divide the order, otherwise the conductor drops");
  if (generator == 0) generator = least_primitive_root(modulus);
  GaloisField field(ell, root_of_unity_degree(ell, order));
  std::vector<DirichletCharacter> out;
  for (auto& zeta : elements_of_order(field, order)) out.emplace_back(t, u, generator, zeta);
  return out;
}

}  // namespace galimage
