#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <random>
#include <string>

#include "galimage/numth/factor.hpp"
#include "galimage/numth/modular.hpp"

namespace galimage {

using Rational = boost::multiprecision::cpp_rational;

// Field policies. Linear algebra and polynomial code is written against this
// small interface: value_type plus zero/one/from_int/add/sub/neg/mul/inv/is_zero/equal.

/// Z/pZ with p < 2^63.
struct PrimeField {
  using value_type = u64;

  u64 p = 2;

  PrimeField() = default;
  explicit PrimeField(u64 prime) : p(prime) { require(is_prime(prime), "PrimeField: modulus must be prime"); }

  value_type zero() const { return 0; }
  value_type one() const { return 1 % p; }
  value_type from_int(i64 a) const { return reduce(a, p); }
  value_type add(value_type a, value_type b) const { return add_mod(a, b, p); }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + (p - b); }
  value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
  value_type mul(value_type a, value_type b) const { return mul_mod(a, b, p); }
  value_type inv(value_type a) const {
    require(a != 0, "PrimeField: division by zero");
    return inv_mod(a, p);
  }
  bool is_zero(value_type a) const { return a == 0; }
  bool equal(value_type a, value_type b) const { return a == b; }
  bool less(value_type a, value_type b) const { return a < b; }

  u64 characteristic() const { return p; }
  unsigned degree() const { return 1; }
  BigInt size() const { return p; }
  value_type random(std::mt19937_64& rng) const { return rng() % p; }
  value_type pth_root(value_type a) const { return a; }
  std::string to_string(value_type a) const { return std::to_string(a); }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;
};

/// The rationals, exact.
struct RationalField {
  using value_type = Rational;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(i64 a) const { return a; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type inv(const value_type& a) const {
    require(a != 0, "RationalField: division by zero");
    return 1 / a;
  }
  bool is_zero(const value_type& a) const { return a == 0; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  bool less(const value_type& a, const value_type& b) const { return a < b; }

  u64 characteristic() const { return 0; }
  std::string to_string(const value_type& a) const { return a.str(); }

  friend bool operator==(const RationalField&, const RationalField&) = default;
};

}  // namespace galimage
