#include <gtest/gtest.h>

#include <random>

#include "galimage/numth.hpp"

using namespace galimage;

namespace {

// Independent oracles: plain trial division and exhaustive enumeration.
bool trial_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::pair<u64, unsigned>> trial_factor(u64 n) {
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 d = 2; d * d <= n; ++d) {
    unsigned e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e) out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

u64 brute_order(u64 a, u64 m) {
  u64 x = a % m;
  for (u64 e = 1;; ++e) {
    if (x == 1 % m) return e;
    x = x * (a % m) % m;
  }
}

std::vector<std::pair<u64, unsigned>> as_pairs(const Factorization& f) {
  std::vector<std::pair<u64, unsigned>> out;
  for (const auto& pp : f.factors) out.emplace_back(static_cast<u64>(pp.prime), pp.exponent);
  return out;
}

}  // namespace

TEST(Factorize, Examples) {
  EXPECT_EQ(as_pairs(factorize(63)), (std::vector<std::pair<u64, unsigned>>{{3, 2}, {7, 1}}));
  EXPECT_TRUE(factorize(1).factors.empty());
  EXPECT_TRUE(factorize(1).complete());
  EXPECT_EQ(as_pairs(factorize(262143)), trial_factor(262143));
  EXPECT_EQ(as_pairs(factorize(262143)),
            (std::vector<std::pair<u64, unsigned>>{{3, 3}, {7, 1}, {19, 1}, {73, 1}}));
}

TEST(Factorize, RandomUpToTenToTheTwelve) {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 300; ++i) {
    const u64 n = 1 + rng() % 1'000'000'000'000ULL;
    auto f = factorize(n);
    ASSERT_TRUE(f.complete());
    EXPECT_EQ(f.product(), BigInt(n));
    for (const auto& pp : f.factors) EXPECT_TRUE(trial_prime(static_cast<u64>(pp.prime))) << pp.prime;
    for (std::size_t j = 1; j < f.factors.size(); ++j) EXPECT_LT(f.factors[j - 1].prime, f.factors[j].prime);
  }
}

TEST(Factorize, MersenneBeyondSixtyFourBits) {
  const BigInt n = (BigInt(1) << 162) - 1;
  auto f = factorize(n);
  EXPECT_TRUE(f.complete());
  EXPECT_EQ(f.product(), n);
  std::vector<BigInt> expected{3, 7, 19, 73, 163, 2593, 71119, 87211, 135433, 262657, 97685839, 272010961};
  EXPECT_EQ(f.primes(), expected);
  EXPECT_EQ(f.factors.front().exponent, 5u);
}

TEST(Factorize, BudgetExhaustionReportsCofactor) {
  // product of two 40-bit primes with a rho budget far too small to split it
  const BigInt p = BigInt("1099511627791"), q = BigInt("1099511628401");
  FactorOptions opts;
  opts.rho_iterations = 16;
  opts.rho_attempts = 1;
  const BigInt n = p * q * p * q * 5;  // above 64 bits so the bounded path runs
  auto f = factorize(n, opts);
  EXPECT_EQ(f.product(), n);
  if (!f.complete()) {
    EXPECT_FALSE(f.cofactors.empty());
    for (const auto& c : f.cofactors) EXPECT_EQ(primality(c), Primality::composite);
  }
}

TEST(Primality, AgreesWithTrialDivision) {
  for (u64 n = 0; n < 20000; ++n) ASSERT_EQ(is_prime(n), trial_prime(n)) << n;
  EXPECT_TRUE(is_prime(18446744073709551557ULL));
  EXPECT_EQ(primality((BigInt(1) << 127) - 1), Primality::probable_prime);
  EXPECT_EQ(primality((BigInt(1) << 128) + 1), Primality::composite);
}

TEST(ModPow, Examples) {
  EXPECT_EQ(mod_pow(2, 6, 63), 1u);
  EXPECT_EQ(mod_pow(12345, 0, 97), 1u);
  EXPECT_EQ(mod_pow(2, 18, 19), 1u);
  EXPECT_EQ(mod_pow_signed(-2, 3, 7), 6u);
  EXPECT_EQ(mod_pow(BigInt(2), BigInt(486), (BigInt(1) << 486) - 1), BigInt(1));
}

TEST(MultiplicativeOrder, Examples) {
  EXPECT_EQ(multiplicative_order(2, 9), 6u);
  EXPECT_EQ(multiplicative_order(1, 35), 1u);
  EXPECT_EQ(multiplicative_order(3, 7), 6u);
  EXPECT_THROW(multiplicative_order(3, 9), Error);
}

TEST(MultiplicativeOrder, DividesPhiAndMatchesEnumeration) {
  for (u64 m = 2; m < 200; ++m) {
    for (u64 a = 1; a < m; ++a) {
      if (std::gcd(a, m) != 1) continue;
      const u64 ord = multiplicative_order(static_cast<i64>(a), m);
      ASSERT_EQ(ord, brute_order(a, m)) << a << " mod " << m;
      ASSERT_EQ(euler_phi(m) % ord, 0u);
    }
  }
}

TEST(PrimitiveRoot, Examples) {
  EXPECT_TRUE(is_primitive_root(2, 9));
  EXPECT_FALSE(is_primitive_root(4, 9));
  EXPECT_THROW(is_primitive_root(3, 9), Error);
  EXPECT_THROW(is_primitive_root(3, 8), Error);
  for (unsigned u = 2; u <= 8; ++u) {
    const u64 m = ipow(3, u);
    EXPECT_TRUE(is_primitive_root(2, m)) << u;
    // lifting-the-exponent: v_3(2^{2*3^{u-2}} - 1) = u - 1, so 2 is not of order phi/3
    EXPECT_NE(mod_pow(2, 2 * ipow(3, u - 2), m), 1u);
  }
}

TEST(Legendre, Examples) {
  EXPECT_EQ(quadratic_residue_symbol(2, 3), -1);
  EXPECT_EQ(quadratic_residue_symbol(1, 101), 1);
  EXPECT_EQ(quadratic_residue_symbol(2, 7), 1);
  EXPECT_EQ(quadratic_residue_symbol(14, 7), 0);
  for (u64 p : {3, 5, 7, 11, 13, 17, 19, 23}) {
    for (u64 a = 1; a < p; ++a) {
      bool square = false;
      for (u64 x = 1; x < p; ++x) square |= (x * x % p == a);
      EXPECT_EQ(quadratic_residue_symbol(static_cast<i64>(a), p), square ? 1 : -1);
    }
  }
}

TEST(EulerPhi, Examples) {
  EXPECT_EQ(euler_phi(9), 6u);
  EXPECT_EQ(euler_phi(1), 1u);
  EXPECT_EQ(euler_phi(81), 54u);
  for (u64 m = 1; m < 300; ++m) {
    u64 count = 0;
    for (u64 a = 1; a <= m; ++a) count += std::gcd(a, m) == 1;
    ASSERT_EQ(euler_phi(m), count) << m;
  }
}

TEST(DiscreteLog, InvertsPowering) {
  for (u64 m : {9ULL, 27ULL, 81ULL, 243ULL, 3125ULL, 49ULL}) {
    const u64 g = least_primitive_root(m);
    for (u64 e = 0; e < euler_phi(m); ++e) ASSERT_EQ(discrete_log(g, mod_pow(g, e, m), m), e);
  }
}

TEST(GaloisField, FieldAxiomsSpotCheck) {
  std::mt19937_64 rng(7);
  for (auto [p, k] : std::vector<std::pair<u64, unsigned>>{{5, 2}, {7, 3}, {3, 4}, {13, 1}, {2, 5}}) {
    GaloisField f(p, k);
    EXPECT_TRUE(poly::is_irreducible(f.prime_field(), f.modulus()));
    for (int i = 0; i < 200; ++i) {
      auto a = f.random(rng), b = f.random(rng), c = f.random(rng);
      EXPECT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
      EXPECT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
      EXPECT_EQ(f.mul(a, b), f.mul(b, a));
      if (!f.is_zero(a)) { EXPECT_EQ(f.mul(a, f.inv(a)), f.one()); }
    }
    EXPECT_EQ(f.order(f.primitive_element()), f.group_order());
  }
}

TEST(GaloisField, LexLeastModulus) {
  // x^2 + 2 is the first irreducible quadratic over F_5 in this ordering (x^2+1, x^2+4 split)
  EXPECT_EQ(GaloisField(5, 2).modulus(), (Poly<PrimeField>{2, 0, 1}));
  // over F_7: x^2 + 1 (since -1 is a non-square mod 7)
  EXPECT_EQ(GaloisField(7, 2).modulus(), (Poly<PrimeField>{1, 0, 1}));
}

TEST(Characters, OrderSixModNineOverF7) {
  auto chars = character_of_conductor(3, 2, 7, 6);
  ASSERT_EQ(chars.size(), 2u);
  EXPECT_EQ(chars[0].value_at_generator().prime_value(), 3u);
  EXPECT_EQ(chars[1].value_at_generator().prime_value(), 5u);
  for (const auto& psi : chars) {
    EXPECT_EQ(psi.generator(), 2u);
    EXPECT_EQ(psi.order(), 6u);
    EXPECT_EQ(psi.conductor(), 9u);
  }
}

TEST(Characters, QuadraticModThree) {
  auto chars = character_of_conductor(3, 1, 11, 2);
  ASSERT_EQ(chars.size(), 1u);
  EXPECT_EQ(chars[0](2), FieldElement::from_int(chars[0].field(), -1));
  EXPECT_EQ(chars[0].conductor(), 3u);
}

TEST(Characters, ExtensionWhenRootsMissing) {
  auto chars = character_of_conductor(3, 2, 5, 6);
  ASSERT_EQ(chars.size(), 2u);
  for (const auto& psi : chars) {
    EXPECT_EQ(psi.field().degree(), 2u);
    EXPECT_EQ(psi.order(), 6u);
  }
}

TEST(Characters, ConductorDropRejected) {
  EXPECT_THROW(character_of_conductor(3, 3, 7, 6), Error);  // 9 does not divide 6
  EXPECT_THROW(character_of_conductor(3, 1, 7, 1), Error);
}

TEST(Characters, MultiplicativeExhaustively) {
  for (unsigned u = 1; u <= 5; ++u) {
    const u64 m = ipow(3, u);
    for (u64 order : {2 * ipow(3, u - 1), ipow(3, u - 1)}) {
      if (order == 1) continue;
      for (u64 ell : {7ULL, 13ULL, 19ULL, 37ULL}) {
        if (root_of_unity_degree(ell, order) > 3) continue;
        for (const auto& psi : character_of_conductor(3, u, ell, order)) {
          ASSERT_EQ(psi.value_at_generator().order(), order);
          ASSERT_EQ(psi.conductor(), m);
          std::vector<FieldElement> val(m);
          for (u64 a = 0; a < m; ++a) val[a] = psi(static_cast<i64>(a));
          for (u64 a = 1; a < m; ++a) {
            if (a % 3 == 0) continue;
            for (u64 b = 1; b < m; ++b) {
              if (b % 3 == 0) continue;
              ASSERT_EQ(val[a * b % m], val[a] * val[b]);
            }
          }
        }
      }
    }
  }
}

TEST(PolyFactor, Examples) {
  auto f1 = factor_polynomial_mod_ell({-1, 0, 1}, 7);
  ASSERT_EQ(f1.size(), 2u);
  EXPECT_EQ(f1[0].factor, (Poly<PrimeField>{1, 1}));
  EXPECT_EQ(f1[1].factor, (Poly<PrimeField>{6, 1}));

  auto f2 = factor_polynomial_mod_ell({1, 0, 1}, 7);
  ASSERT_EQ(f2.size(), 1u);
  EXPECT_EQ(f2[0].factor, (Poly<PrimeField>{1, 0, 1}));

  auto f3 = factor_polynomial_mod_ell({-2, 0, 0, 1}, 5);
  ASSERT_EQ(f3.size(), 2u);
  EXPECT_EQ(f3[0].factor, (Poly<PrimeField>{2, 1}));     // x - 3
  EXPECT_EQ(f3[1].factor, (Poly<PrimeField>{4, 3, 1}));  // x^2 + 3x + 4
}

TEST(PolyFactor, ExhaustiveSmallDegreeAgainstRootFinding) {
  for (u64 ell : {5ULL, 7ULL, 11ULL, 13ULL}) {
    PrimeField f(ell);
    std::mt19937_64 rng(ell);
    for (int trial = 0; trial < 300; ++trial) {
      const int deg = 1 + static_cast<int>(rng() % 4);
      Poly<PrimeField> p(deg + 1);
      for (auto& c : p) c = rng() % ell;
      p[deg] = 1 + rng() % (ell - 1);
      auto factors = poly::factor(f, p);
      // re-expansion
      Poly<PrimeField> prod{1};
      for (const auto& fc : factors) {
        EXPECT_TRUE(poly::is_irreducible(f, fc.factor));
        for (unsigned i = 0; i < fc.multiplicity; ++i) prod = poly::mul(f, prod, fc.factor);
      }
      EXPECT_EQ(prod, poly::monic(f, p));
      // brute-force roots with multiplicity equal linear factors
      std::map<u64, unsigned> linear;
      for (const auto& fc : factors) {
        if (fc.factor.size() == 2) linear[f.neg(fc.factor[0])] = fc.multiplicity;
      }
      for (u64 x = 0; x < ell; ++x) {
        unsigned mult = 0;
        Poly<PrimeField> q = p;
        while (!q.empty() && poly::eval(f, q, x) == 0) {
          q = poly::div_exact(f, q, Poly<PrimeField>{f.neg(x), 1});
          ++mult;
        }
        EXPECT_EQ(linear.count(x) ? linear[x] : 0u, mult);
      }
    }
  }
}

TEST(PolyRoots, OverExtensionField) {
  GaloisField f(7, 2);
  // x^2 - 3 has no roots in F_7 (3 is a non-square) but two in F_49
  Poly<GaloisField> p{f.from_int(-3), f.zero(), f.one()};
  auto r = poly::roots(f, p);
  ASSERT_EQ(r.size(), 2u);
  for (const auto& x : r) EXPECT_EQ(f.mul(x, x), f.from_int(3));
}
