#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "galimage/numth/arith.hpp"
#include "galimage/numth/poly.hpp"

namespace galimage {

/// F_{p^k} as F_p[a]/(m(a)), where m is the least monic irreducible of degree k when
/// coefficient vectors are compared from the a^{k-1} coefficient down to a^0.
/// Cheap to copy (shared immutable state); usable as a field policy.
class GaloisField {
 public:
  using value_type = std::vector<u64>;  // k coefficients, low degree first

  GaloisField() : GaloisField(2, 1) {}

  GaloisField(u64 p, unsigned k) : impl_(lookup(p, k)) {}

  static GaloisField make(u64 p, unsigned k) { return GaloisField(p, k); }

  u64 characteristic() const { return impl_->p; }
  unsigned degree() const { return impl_->k; }
  BigInt size() const { return big_pow(impl_->p, impl_->k); }
  const Poly<PrimeField>& modulus() const { return impl_->modulus; }
  const PrimeField& prime_field() const { return impl_->base; }

  value_type zero() const { return value_type(impl_->k, 0); }
  value_type one() const {
    value_type r = zero();
    r[0] = 1;
    return r;
  }
  value_type from_int(i64 a) const {
    value_type r = zero();
    r[0] = reduce(a, impl_->p);
    return r;
  }
  value_type from_prime(u64 a) const { return from_int(static_cast<i64>(a % impl_->p)); }
  /// Element from base-p digits of idx (a^0 digit least significant).
  value_type from_index(u64 idx) const {
    value_type r = zero();
    for (unsigned i = 0; i < impl_->k; ++i) {
      r[i] = idx % impl_->p;
      idx /= impl_->p;
    }
    return r;
  }
  /// The class of a, a generator of the field over F_p.
  value_type generator_a() const {
    if (impl_->k == 1) return from_int(static_cast<i64>(impl_->p - impl_->modulus[0]));
    value_type r = zero();
    r[1] = 1;
    return r;
  }

  value_type add(const value_type& a, const value_type& b) const {
    value_type r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = add_mod(a[i], b[i], impl_->p);
    return r;
  }
  value_type sub(const value_type& a, const value_type& b) const {
    value_type r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = impl_->base.sub(a[i], b[i]);
    return r;
  }
  value_type neg(const value_type& a) const {
    value_type r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = impl_->base.neg(a[i]);
    return r;
  }
  value_type mul(const value_type& a, const value_type& b) const {
    const unsigned k = impl_->k;
    const u64 p = impl_->p;
    if (k == 1) return {mul_mod(a[0], b[0], p)};
    std::vector<u64> prod(2 * k - 1, 0);
    for (unsigned i = 0; i < k; ++i) {
      if (a[i] == 0) continue;
      for (unsigned j = 0; j < k; ++j) prod[i + j] = add_mod(prod[i + j], mul_mod(a[i], b[j], p), p);
    }
    const auto& m = impl_->modulus;  // monic, degree k
    for (unsigned i = 2 * k - 1; i-- > k;) {
      const u64 c = prod[i];
      if (c == 0) continue;
      for (unsigned j = 0; j < k; ++j) {
        prod[i - k + j] = impl_->base.sub(prod[i - k + j], mul_mod(c, m[j], p));
      }
    }
    prod.resize(k);
    return prod;
  }
  value_type pow(value_type a, BigInt e) const {
    value_type r = one();
    while (e > 0) {
      if ((e & 1) != 0) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  value_type inv(const value_type& a) const {
    require(!is_zero(a), "GaloisField: division by zero");
    return pow(a, size() - 2);
  }
  bool is_zero(const value_type& a) const {
    for (u64 c : a) {
      if (c != 0) return false;
    }
    return true;
  }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  bool less(const value_type& a, const value_type& b) const {
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  }
  value_type random(std::mt19937_64& rng) const {
    value_type r(impl_->k);
    for (auto& c : r) c = rng() % impl_->p;
    return r;
  }
  value_type pth_root(const value_type& a) const { return pow(a, big_pow(impl_->p, impl_->k - 1)); }
  value_type frobenius(const value_type& a) const { return pow(a, impl_->p); }

  /// Multiplicative order of a nonzero element.
  u64 order(const value_type& a) const {
    require(!is_zero(a), "GaloisField: order of zero");
    const u64 n = group_order();
    u64 ord = n;
    for (auto [q, e] : factor_u64(n)) {
      for (unsigned i = 0; i < e; ++i) {
        if (!equal(pow(a, ord / q), one())) break;
        ord /= q;
      }
    }
    return ord;
  }
  u64 group_order() const {
    const BigInt q = size();
    require(q <= BigInt(std::numeric_limits<u64>::max()), "GaloisField: field too large");
    return static_cast<u64>(q) - 1;
  }
  /// Least generator of the multiplicative group in the from_index ordering.
  value_type primitive_element() const {
    std::call_once(impl_->primitive_once, [this] {
      const u64 n = group_order();
      for (u64 idx = 1;; ++idx) {
        auto c = from_index(idx);
        if (order(c) == n) {
          impl_->primitive = c;
          return;
        }
      }
    });
    return impl_->primitive;
  }
  bool in_prime_field(const value_type& a) const {
    for (std::size_t i = 1; i < a.size(); ++i) {
      if (a[i] != 0) return false;
    }
    return true;
  }

  std::string to_string(const value_type& a) const {
    if (impl_->k == 1) return std::to_string(a[0]);
    std::string out;
    for (std::size_t i = a.size(); i-- > 0;) {
      if (a[i] == 0) continue;
      if (!out.empty()) out += "+";
      if (i == 0 || a[i] != 1) out += std::to_string(a[i]);
      if (i > 0) out += (i == 0 || a[i] != 1 ? "*a" : "a");
      if (i > 1) out += "^" + std::to_string(i);
    }
    return out.empty() ? "0" : out;
  }

  friend bool operator==(const GaloisField& x, const GaloisField& y) { return x.impl_ == y.impl_; }

 private:
  struct Impl {
    u64 p = 2;
    unsigned k = 1;
    PrimeField base;
    Poly<PrimeField> modulus;
    mutable std::once_flag primitive_once;
    mutable value_type primitive;
  };

  static Poly<PrimeField> least_irreducible(const PrimeField& f, unsigned k) {
    const u64 p = f.p;
    if (k == 1) return {0, 1};
    const BigInt total = big_pow(p, k);
    for (BigInt idx = 0; idx < total; ++idx) {
      // idx digits: a^0 coefficient least significant, so ascending idx compares from a^{k-1} down
      Poly<PrimeField> cand(k + 1, 0);
      BigInt t = idx;
      for (unsigned i = 0; i < k; ++i) {
        cand[i] = static_cast<u64>(t % p);
        t /= p;
      }
      cand[k] = 1;
      if (cand[0] == 0) continue;
      if (poly::is_irreducible(f, cand)) return cand;
    }
    fail(ErrorKind::invalid_input, "GaloisField: no irreducible polynomial found");
  }

  static std::shared_ptr<const Impl> lookup(u64 p, unsigned k) {
    require(k >= 1, "GaloisField: degree must be positive");
    require(is_prime(p), "GaloisField: characteristic must be prime");
    static std::mutex mu;
    static std::map<std::pair<u64, unsigned>, std::shared_ptr<const Impl>> cache;
    std::lock_guard lock(mu);
    auto it = cache.find({p, k});
    if (it != cache.end()) return it->second;
    auto impl = std::make_shared<Impl>();
    impl->p = p;
    impl->k = k;
    impl->base = PrimeField(p);
    impl->modulus = least_irreducible(impl->base, k);
    cache.emplace(std::make_pair(p, k), impl);
    return impl;
  }

  std::shared_ptr<const Impl> impl_;
};

/// An element of a finite field bundled with its field.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(GaloisField field, GaloisField::value_type value) : field_(std::move(field)), value_(std::move(value)) {}
  static FieldElement from_int(const GaloisField& field, i64 a) { return {field, field.from_int(a)}; }

  const GaloisField& field() const { return field_; }
  const GaloisField::value_type& value() const { return value_; }
  u64 characteristic() const { return field_.characteristic(); }
  unsigned degree() const { return field_.degree(); }

  bool is_zero() const { return field_.is_zero(value_); }
  bool in_prime_field() const { return field_.in_prime_field(value_); }
  u64 prime_value() const {
    require(in_prime_field(), "FieldElement: value is not in the prime field");
    return value_[0];
  }
  u64 order() const { return field_.order(value_); }
  FieldElement inverse() const { return {field_, field_.inv(value_)}; }
  FieldElement pow(const BigInt& e) const { return {field_, field_.pow(value_, e)}; }
  FieldElement pow_signed(i64 e) const { return e >= 0 ? pow(e) : inverse().pow(-e); }
  std::string to_string() const { return field_.to_string(value_); }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    check(a, b);
    return {a.field_, a.field_.add(a.value_, b.value_)};
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    check(a, b);
    return {a.field_, a.field_.sub(a.value_, b.value_)};
  }
  friend FieldElement operator-(const FieldElement& a) { return {a.field_, a.field_.neg(a.value_)}; }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    check(a, b);
    return {a.field_, a.field_.mul(a.value_, b.value_)};
  }
  friend FieldElement operator*(i64 c, const FieldElement& a) { return from_int(a.field_, c) * a; }
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_ == b.field_ && a.value_ == b.value_;
  }
  friend bool operator<(const FieldElement& a, const FieldElement& b) { return a.field_.less(a.value_, b.value_); }

 private:
  static void check(const FieldElement& a, const FieldElement& b) {
    require(a.field_ == b.field_, "FieldElement: operands live in different fields");
  }

  GaloisField field_;
  GaloisField::value_type value_;
};

/// Embedding F_{p^a} -> F_{p^b} (a | b) that sends the class of `a` to the least root of the
/// defining polynomial of F_{p^a} in F_{p^b}. Embeddings for different pairs (a, b) are not
/// chosen compatibly, so compare values only up to Frobenius.
inline FieldElement embed(const FieldElement& x, const GaloisField& to) {
  const GaloisField& from = x.field();
  require(from.characteristic() == to.characteristic() && to.degree() % from.degree() == 0,
          "embed: target field does not contain the source field");
  if (from == to) return x;
  if (from.degree() == 1) return {to, to.from_prime(x.value()[0])};
  static std::mutex mu;
  static std::map<std::tuple<u64, unsigned, unsigned>, GaloisField::value_type> cache;
  GaloisField::value_type image;
  {
    std::lock_guard lock(mu);
    const auto key = std::make_tuple(from.characteristic(), from.degree(), to.degree());
    auto it = cache.find(key);
    if (it == cache.end()) {
      Poly<GaloisField> m;
      for (u64 c : from.modulus()) m.push_back(to.from_prime(c));
      auto rs = poly::roots(to, m);
      require(!rs.empty(), "embed: defining polynomial has no root in the target field");
      std::sort(rs.begin(), rs.end(), [&](const auto& u, const auto& v) { return to.less(u, v); });
      it = cache.emplace(key, rs.front()).first;
    }
    image = it->second;
  }
  auto acc = to.zero();
  auto power = to.one();
  for (u64 c : x.value()) {
    acc = to.add(acc, to.mul(to.from_prime(c), power));
    power = to.mul(power, image);
  }
  return {to, acc};
}

/// x^(p^j)
inline FieldElement frobenius_power(const FieldElement& x, unsigned j) {
  FieldElement r = x;
  for (unsigned i = 0; i < j; ++i) r = {r.field(), r.field().frobenius(r.value())};
  return r;
}

}  // namespace galimage
