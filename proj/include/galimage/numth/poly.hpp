#pragma once

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include "galimage/numth/factor.hpp"
#include "galimage/numth/field.hpp"

namespace galimage {

/// Dense univariate polynomial, coefficients low degree first, no trailing zeros.
template <class F>
using Poly = std::vector<typename F::value_type>;

namespace poly {

template <class F>
void trim(const F& f, Poly<F>& a) {
  while (!a.empty() && f.is_zero(a.back())) a.pop_back();
}

template <class F>
int degree(const Poly<F>& a) {
  return static_cast<int>(a.size()) - 1;
}

template <class F>
Poly<F> constant(const F& f, typename F::value_type c) {
  Poly<F> r{c};
  trim(f, r);
  return r;
}

template <class F>
Poly<F> x_power(const F& f, std::size_t n) {
  Poly<F> r(n + 1, f.zero());
  r[n] = f.one();
  return r;
}

template <class F>
Poly<F> from_ints(const F& f, const std::vector<i64>& coeffs) {
  Poly<F> r;
  for (i64 c : coeffs) r.push_back(f.from_int(c));
  trim(f, r);
  return r;
}

template <class F>
bool equal(const F& f, const Poly<F>& a, const Poly<F>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!f.equal(a[i], b[i])) return false;
  }
  return true;
}

template <class F>
Poly<F> add(const F& f, const Poly<F>& a, const Poly<F>& b) {
  Poly<F> r(std::max(a.size(), b.size()), f.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = f.add(r[i], b[i]);
  trim(f, r);
  return r;
}

template <class F>
Poly<F> sub(const F& f, const Poly<F>& a, const Poly<F>& b) {
  Poly<F> r(std::max(a.size(), b.size()), f.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = f.sub(r[i], b[i]);
  trim(f, r);
  return r;
}

template <class F>
Poly<F> scale(const F& f, const Poly<F>& a, const typename F::value_type& c) {
  Poly<F> r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(f.mul(x, c));
  trim(f, r);
  return r;
}

template <class F>
Poly<F> mul(const F& f, const Poly<F>& a, const Poly<F>& b) {
  if (a.empty() || b.empty()) return {};
  Poly<F> r(a.size() + b.size() - 1, f.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (f.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
  }
  trim(f, r);
  return r;
}

/// Quotient and remainder; divisor must be nonzero.
template <class F>
std::pair<Poly<F>, Poly<F>> divmod(const F& f, Poly<F> a, const Poly<F>& b) {
  require(!b.empty(), "poly::divmod: division by zero polynomial");
  if (a.size() < b.size()) return {{}, a};
  const auto lead_inv = f.inv(b.back());
  Poly<F> q(a.size() - b.size() + 1, f.zero());
  for (std::size_t i = a.size(); i-- >= b.size();) {
    const auto c = f.mul(a[i], lead_inv);
    q[i - (b.size() - 1)] = c;
    if (f.is_zero(c)) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      auto& slot = a[i - (b.size() - 1) + j];
      slot = f.sub(slot, f.mul(c, b[j]));
    }
    if (i == 0) break;
  }
  a.resize(b.size() - 1);
  trim(f, a);
  trim(f, q);
  return {q, a};
}

template <class F>
Poly<F> mod(const F& f, const Poly<F>& a, const Poly<F>& b) {
  return divmod(f, a, b).second;
}

template <class F>
Poly<F> div_exact(const F& f, const Poly<F>& a, const Poly<F>& b) {
  auto [q, r] = divmod(f, a, b);
  require(r.empty(), "poly::div_exact: nonzero remainder");
  return q;
}

template <class F>
Poly<F> monic(const F& f, const Poly<F>& a) {
  if (a.empty()) return a;
  return scale(f, a, f.inv(a.back()));
}

template <class F>
Poly<F> gcd(const F& f, Poly<F> a, Poly<F> b) {
  while (!b.empty()) {
    auto r = mod(f, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(f, a);
}

template <class F>
Poly<F> derivative(const F& f, const Poly<F>& a) {
  Poly<F> r;
  for (std::size_t i = 1; i < a.size(); ++i) r.push_back(f.mul(a[i], f.from_int(static_cast<i64>(i))));
  trim(f, r);
  return r;
}

template <class F>
typename F::value_type eval(const F& f, const Poly<F>& a, const typename F::value_type& x) {
  auto acc = f.zero();
  for (std::size_t i = a.size(); i-- > 0;) acc = f.add(f.mul(acc, x), a[i]);
  return acc;
}

/// base^exp mod m.
template <class F>
Poly<F> powmod(const F& f, const Poly<F>& base, const BigInt& exp, const Poly<F>& m) {
  Poly<F> result = mod(f, constant(f, f.one()), m);
  Poly<F> b = mod(f, base, m);
  const auto bits = exp == 0 ? 0u : static_cast<unsigned>(boost::multiprecision::msb(exp)) + 1;
  for (unsigned i = bits; i-- > 0;) {
    result = mod(f, mul(f, result, result), m);
    if (boost::multiprecision::bit_test(exp, i)) result = mod(f, mul(f, result, b), m);
  }
  return result;
}

template <class F>
bool is_one(const F& f, const Poly<F>& a) {
  return a.size() == 1 && f.equal(a[0], f.one());
}

/// Rabin's irreducibility test over a finite field.
template <class F>
bool is_irreducible(const F& f, const Poly<F>& p) {
  const int n = degree<F>(p);
  if (n <= 0) return false;
  if (n == 1) return true;
  const BigInt q = f.size();
  const Poly<F> x = x_power(f, 1);
  auto frob_power = [&](unsigned k) {
    Poly<F> h = mod(f, x, p);
    for (unsigned i = 0; i < k; ++i) h = powmod(f, h, q, p);
    return h;
  };
  if (!equal(f, frob_power(static_cast<unsigned>(n)), mod(f, x, p))) return false;
  for (auto [r, e] : factor_u64(static_cast<u64>(n))) {
    auto h = frob_power(static_cast<unsigned>(n / r));
    if (!is_one(f, gcd(f, sub(f, h, x), p))) return false;
  }
  return true;
}

template <class F>
struct Factor {
  Poly<F> factor;  // monic irreducible
  unsigned multiplicity = 0;
};

template <class F>
Poly<F> pth_root_poly(const F& f, const Poly<F>& a) {
  const u64 p = f.characteristic();
  Poly<F> r;
  for (std::size_t i = 0; i < a.size(); i += p) r.push_back(f.pth_root(a[i]));
  trim(f, r);
  return r;
}

/// Square-free decomposition of a monic polynomial: pairs (squarefree part, multiplicity).
template <class F>
std::vector<std::pair<Poly<F>, unsigned>> squarefree_decomposition(const F& f, const Poly<F>& a) {
  std::vector<std::pair<Poly<F>, unsigned>> out;
  if (degree<F>(a) <= 0) return out;
  Poly<F> c = gcd(f, a, derivative(f, a));
  Poly<F> w = div_exact(f, a, c);
  unsigned i = 1;
  while (!is_one(f, w)) {
    Poly<F> y = gcd(f, w, c);
    Poly<F> z = div_exact(f, w, y);
    if (degree<F>(z) > 0) out.emplace_back(monic(f, z), i);
    ++i;
    w = y;
    c = div_exact(f, c, y);
  }
  if (!is_one(f, c)) {
    const auto p = static_cast<unsigned>(f.characteristic());
    for (auto& [g, m] : squarefree_decomposition(f, pth_root_poly(f, c))) out.emplace_back(g, m * p);
  }
  return out;
}

/// Distinct-degree factorization of a squarefree monic polynomial: (product of degree-d factors, d).
template <class F>
std::vector<std::pair<Poly<F>, unsigned>> distinct_degree(const F& f, Poly<F> a) {
  std::vector<std::pair<Poly<F>, unsigned>> out;
  const BigInt q = f.size();
  const Poly<F> x = x_power(f, 1);
  Poly<F> h = mod(f, x, a);
  for (unsigned d = 1; degree<F>(a) >= 2 * static_cast<int>(d); ++d) {
    h = powmod(f, h, q, a);
    Poly<F> g = gcd(f, sub(f, h, x), a);
    if (!is_one(f, g)) {
      out.emplace_back(g, d);
      a = div_exact(f, a, g);
      h = mod(f, h, a);
    }
  }
  if (degree<F>(a) > 0) out.emplace_back(a, static_cast<unsigned>(degree<F>(a)));
  return out;
}

/// Cantor-Zassenhaus splitting of a product of distinct monic irreducibles of degree d.
/// Odd characteristic only.
template <class F>
std::vector<Poly<F>> equal_degree(const F& f, const Poly<F>& a, unsigned d, std::mt19937_64& rng) {
  require(f.characteristic() % 2 == 1, "poly::equal_degree: odd characteristic required");
  const int n = degree<F>(a);
  if (n == static_cast<int>(d)) return {a};
  const BigInt exp = (boost::multiprecision::pow(f.size(), d) - 1) / 2;
  for (;;) {
    Poly<F> r;
    for (int i = 0; i < n; ++i) r.push_back(f.random(rng));
    trim(f, r);
    if (degree<F>(r) <= 0) continue;
    Poly<F> b = sub(f, powmod(f, r, exp, a), constant(f, f.one()));
    Poly<F> g = gcd(f, b, a);
    if (degree<F>(g) > 0 && degree<F>(g) < n) {
      auto left = equal_degree(f, g, d, rng);
      auto right = equal_degree(f, div_exact(f, a, g), d, rng);
      left.insert(left.end(), right.begin(), right.end());
      return left;
    }
  }
}

template <class F>
bool less(const Poly<F>& a, const Poly<F>& b, const F& f) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = a.size(); i-- > 0;) {
    if (f.less(a[i], b[i])) return true;
    if (f.less(b[i], a[i])) return false;
  }
  return false;
}

/// Complete factorization of a nonzero polynomial over a finite field into monic
/// irreducibles, sorted by degree then coefficients. The leading coefficient is dropped.
template <class F>
std::vector<Factor<F>> factor(const F& f, const Poly<F>& a, u64 seed = 0x9e3779b97f4a7c15ULL) {
  require(!a.empty(), "poly::factor: zero polynomial");
  std::mt19937_64 rng(seed);
  std::vector<Factor<F>> out;
  for (auto& [sq, mult] : squarefree_decomposition(f, monic(f, a))) {
    for (auto& [part, d] : distinct_degree(f, sq)) {
      for (auto& g : equal_degree(f, part, d, rng)) out.push_back({monic(f, g), mult});
    }
  }
  std::sort(out.begin(), out.end(), [&](const Factor<F>& x, const Factor<F>& y) {
    if (less(x.factor, y.factor, f)) return true;
    if (less(y.factor, x.factor, f)) return false;
    return x.multiplicity < y.multiplicity;
  });
  // merge equal factors (p-th power splitting can produce repeats)
  std::vector<Factor<F>> merged;
  for (auto& fc : out) {
    if (!merged.empty() && equal(f, merged.back().factor, fc.factor)) {
      merged.back().multiplicity += fc.multiplicity;
    } else {
      merged.push_back(fc);
    }
  }
  return merged;
}

/// Distinct roots in the coefficient field.
template <class F>
std::vector<typename F::value_type> roots(const F& f, const Poly<F>& a, u64 seed = 0x243f6a8885a308d3ULL) {
  std::vector<typename F::value_type> out;
  if (degree<F>(a) <= 0) return out;
  Poly<F> m = monic(f, a);
  const Poly<F> x = x_power(f, 1);
  Poly<F> g = gcd(f, sub(f, powmod(f, x, f.size(), m), x), m);
  if (degree<F>(g) <= 0) return out;
  std::mt19937_64 rng(seed);
  for (auto& lin : equal_degree(f, g, 1, rng)) out.push_back(f.neg(monic(f, lin)[0]));
  return out;
}

}  // namespace poly

/// Factorization over F_ell of an integer-coefficient polynomial (coefficients low degree first).
inline std::vector<poly::Factor<PrimeField>> factor_polynomial_mod_ell(const std::vector<i64>& coeffs, u64 ell) {
  PrimeField f(ell);
  auto p = poly::from_ints(f, coeffs);
  require(!p.empty(), "factor_polynomial_mod_ell: zero polynomial");
  return poly::factor(f, p);
}

}  // namespace galimage
