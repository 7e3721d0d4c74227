#include <gtest/gtest.h>

#include <set>

#include "galimage/bounds.hpp"

using namespace galimage;

namespace {

// Brute force, no factoring: every prime 3 < ell <= 2^{2*3^{u-1}} - 1 with
// 2^{2*3^{u-1}} = 1 mod ell and ell = 1 mod 3^{u-1}.
std::set<u64> brute_force_candidates(unsigned u) {
  const u64 e = 2 * ipow(3, u - 1);
  const u64 limit = (1ULL << e) - 1;
  const u64 cong = ipow(3, u - 1);
  std::vector<bool> composite(limit + 1, false);
  std::set<u64> out;
  for (u64 p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    for (u64 j = p * p; j <= limit; j += p) composite[j] = true;
    if (p > 3 && mod_pow(2, e, p) == 1 && (p - 1) % cong == 0) out.insert(p);
  }
  return out;
}

std::set<u64> as_set(const CandidateSet& c) {
  std::set<u64> out;
  for (const auto& p : c.primes) out.insert(static_cast<u64>(p));
  return out;
}

}  // namespace

TEST(FamilyMember, Validation) {
  EXPECT_NO_THROW(FamilyMember::make(4));
  EXPECT_EQ(FamilyMember::make(4).level(), BigInt(162));
  EXPECT_THROW(FamilyMember::make(3), Error);
  EXPECT_THROW(FamilyMember::make(4, 4, 3), Error);   // 4 not prime
  EXPECT_THROW(FamilyMember::make(4, 7, 3), Error);   // 7 = 1 mod 3 is a square
  EXPECT_THROW(FamilyMember::make(4, 3, 3), Error);
  EXPECT_NO_THROW(FamilyMember::make(4, 5, 3));
  EXPECT_THROW(FamilyMember::make(5).u(), Error);
}

TEST(ReducibleCandidates, LevelOneSixtyTwo) {
  auto c = reducible_candidates(FamilyMember::make(4));
  EXPECT_TRUE(c.complete);
  EXPECT_EQ(c.bound_number, BigInt(63));
  EXPECT_EQ(as_set(c), (std::set<u64>{7}));
}

TEST(ReducibleCandidates, NSix) {
  auto c = reducible_candidates(FamilyMember::make(6));
  EXPECT_TRUE(c.complete);
  EXPECT_EQ(c.bound_number, BigInt(262143));
  EXPECT_EQ(as_set(c), (std::set<u64>{19, 73}));
}

TEST(ReducibleCandidates, OracleEquivalence) {
  for (unsigned u : {2u, 3u}) {
    EXPECT_EQ(as_set(reducible_candidates(FamilyMember::make(2 * u))), brute_force_candidates(u)) << u;
  }
}

TEST(ReducibleCandidates, CongruenceRestatement) {
  for (unsigned n : {4u, 6u, 8u, 10u}) {
    auto m = FamilyMember::make(n);
    auto c = reducible_candidates(m);
    EXPECT_TRUE(c.complete) << n;
    for (const auto& ell : c.primes) {
      EXPECT_EQ((ell - 1) % ipow(3, n / 2 - 1), 0);
      if (ell < BigInt(1) << 62) { EXPECT_TRUE(is_reducible_candidate(m, static_cast<u64>(ell))); }
    }
  }
}

TEST(ReducibleCandidates, MembershipMatchesSetBelowScanLimit) {
  for (unsigned n : {4u, 6u, 8u}) {
    auto m = FamilyMember::make(n);
    auto c = as_set(reducible_candidates(m));
    for (u64 ell = 2; ell < 20000; ++ell) {
      if (!is_prime(ell)) continue;
      EXPECT_EQ(is_reducible_candidate(m, ell), c.count(ell) > 0) << n << " " << ell;
    }
  }
}

TEST(ReducibleCandidates, OddNRejected) { EXPECT_THROW(reducible_candidates(FamilyMember::make(5)), Error); }

TEST(DihedralCandidates, Examples) {
  for (unsigned n : {4u, 5u, 6u, 9u}) EXPECT_TRUE(dihedral_candidates(FamilyMember::make(n)).empty());
  EXPECT_TRUE(dihedral_candidates(FamilyMember::make(4, 5, 3)).empty());
  // s = 17 is a primitive root mod 9? 17 = 8 mod 9 has order 2, so the family rejects it
  EXPECT_THROW(FamilyMember::make(4, 17, 3), Error);
  // s = 13, t = 5: 13 = 3 mod 25 has order 20, non-residue mod 5; 14 = 2 * 7 leaves 7
  EXPECT_EQ(dihedral_candidates(FamilyMember::make(4, 13, 5)), (std::vector<u64>{7}));
}

TEST(SmallImage, Examples) {
  auto a = small_image_exclusion(7, FamilyMember::make(4));
  EXPECT_TRUE(a.excluded);
  EXPECT_EQ(a.basis, SmallImageBasis::weight_two_rule);
  auto b = small_image_exclusion(5, FamilyMember::make(8));
  EXPECT_TRUE(b.excluded);
  EXPECT_FALSE(b.trusted);
  EXPECT_EQ(b.basis, SmallImageBasis::wild_inertia);
  EXPECT_NE(b.justification.find("27 > 5"), std::string::npos);
  auto c = small_image_exclusion(5, FamilyMember::make(4));
  EXPECT_TRUE(c.trusted);
  EXPECT_EQ(c.basis, SmallImageBasis::trusted_claim);
  EXPECT_EQ(small_image_exclusion(5, FamilyMember::make(5)).basis, SmallImageBasis::trusted_claim);
  EXPECT_EQ(small_image_exclusion(5, FamilyMember::make(6)).basis, SmallImageBasis::wild_inertia);
  EXPECT_EQ(small_image_exclusion(3, FamilyMember::make(4)).basis, SmallImageBasis::out_of_scope);
}

TEST(Density, ExactRationals) {
  EXPECT_EQ(density_upper_bound(FamilyMember::make(4)), Rational(1, 2));
  EXPECT_EQ(density_upper_bound(FamilyMember::make(6)), Rational(1, 6));
  Rational prev = 1;
  for (unsigned n = 4; n <= 40; n += 2) {
    auto d = density_upper_bound(FamilyMember::make(n));
    EXPECT_EQ(d * euler_phi(ipow(3, n / 2 - 1)), Rational(1));
    EXPECT_LE(d, prev);
    prev = d;
  }
}

TEST(FieldExponent, Examples) {
  EXPECT_EQ(field_exponent_lower_bound(7, 4), 1u);
  EXPECT_EQ(field_exponent_lower_bound(5, 6), 3u);
  EXPECT_EQ(field_exponent_lower_bound(7, 8), 9u);
}

TEST(FieldExponent, MonotoneAndUnbounded) {
  for (u64 ell = 5; ell <= 50; ++ell) {
    if (!is_prime(ell)) continue;
    u64 prev = 0;
    for (unsigned n = 4; n <= 30; ++n) {
      const u64 r = field_exponent_lower_bound(ell, n);
      // oracle: enumerate the coset of ell in (Z/3^{c-1})^*/{+-1}
      const u64 m = ipow(3, (n + 1) / 2 - 1);
      u64 e = 1, x = ell % m;
      while (x != 1 % m && x != m - 1) {
        x = x * ell % m;
        ++e;
      }
      EXPECT_EQ(r, m <= 2 ? 1 : e);
      EXPECT_GE(r, prev);
      prev = r;
    }
    EXPECT_GT(prev, field_exponent_lower_bound(ell, 6));
  }
}

TEST(CoefficientDegree, Examples) {
  EXPECT_EQ(coefficient_degree_lower_bound(4), 1u);
  EXPECT_EQ(coefficient_degree_lower_bound(5), 3u);
  EXPECT_EQ(coefficient_degree_lower_bound(6), 3u);
  EXPECT_EQ(coefficient_degree_lower_bound(10), 27u);
}

TEST(RealizationPlan, Examples) {
  EXPECT_EQ(realization_plan(5, 1).n, 4u);
  EXPECT_EQ(realization_plan(5, 3).n, 6u);
  EXPECT_EQ(realization_plan(5, 3).r, 3u);
  EXPECT_EQ(realization_plan(7, 1).n, 6u);
  EXPECT_NE(realization_plan(7, 1).ramification.find("6*7"), std::string::npos);
}

TEST(RealizationPlan, ConditionsHoldOnRecheck) {
  for (u64 ell : {5, 7, 11, 13, 19, 37, 73, 109}) {
    for (u64 r0 = 1; r0 <= 6; ++r0) {
      auto plan = realization_plan(ell, r0);
      EXPECT_EQ(plan.n % 2, 0u);
      EXPECT_FALSE(is_reducible_candidate(FamilyMember::make(plan.n), ell));
      EXPECT_GE(field_exponent_lower_bound(ell, plan.n), r0);
      EXPECT_GE(plan.r, r0);
      // minimality
      for (unsigned n = 4; n < plan.n; n += 2) {
        EXPECT_TRUE(is_reducible_candidate(FamilyMember::make(n), ell) || field_exponent_lower_bound(ell, n) < r0);
      }
    }
  }
}

TEST(FamilyReport, LevelOneSixtyTwo) {
  auto r = family_report(FamilyMember::make(4), 100);
  EXPECT_TRUE(r.complete());
  for (const auto& e : r.entries) {
    EXPECT_FALSE(e.trail.empty());
    if (e.ell <= 3) {
      EXPECT_EQ(e.status, PrimeStatus::out_of_scope);
    } else if (e.ell == 7) {
      EXPECT_EQ(e.status, PrimeStatus::reducible_candidate);
    } else {
      EXPECT_EQ(e.status, PrimeStatus::large_guaranteed) << e.ell;
    }
  }
  EXPECT_EQ(r.entries.size(), 25u);  // primes up to 100
  EXPECT_EQ(r.density, Rational(1, 2));
}

TEST(FamilyReport, NSixFlagsNineteenAndSeventyThree) {
  auto r = family_report(FamilyMember::make(6), 100);
  std::set<u64> flagged;
  for (const auto& e : r.entries) {
    if (e.status == PrimeStatus::reducible_candidate) flagged.insert(e.ell);
  }
  EXPECT_EQ(flagged, (std::set<u64>{19, 73}));
}

TEST(FamilyReport, StatusesPartitionScannedPrimes) {
  for (unsigned n : {4u, 6u, 8u, 12u}) {
    auto r = family_report(FamilyMember::make(n), 500);
    std::set<u64> seen;
    for (const auto& e : r.entries) {
      EXPECT_TRUE(seen.insert(e.ell).second);
      EXPECT_TRUE(is_prime(e.ell));
    }
    u64 primes = 0;
    for (u64 x = 2; x <= 500; ++x) primes += is_prime(x);
    EXPECT_EQ(seen.size(), primes);
  }
}

TEST(FamilyReport, GeneralizedPairUsesFullCharacterOrder) {
  // t = 5: psi(s) = +-1/s has order dividing phi(5^u) = 4*5^{u-1}, so the bound uses s^{4*5^{u-1}} - 1
  auto m = FamilyMember::make(4, 2, 5);
  auto c = reducible_candidates(m);
  EXPECT_EQ(c.bound_number, BigInt((1ULL << 20) - 1));
  for (const auto& p : c.primes) EXPECT_EQ(p % 5, 1);
  EXPECT_EQ(as_set(c), (std::set<u64>{11, 31, 41}));
}
