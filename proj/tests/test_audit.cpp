#include <gtest/gtest.h>

#include <set>

#include "galimage/audit.hpp"

using namespace galimage;
using namespace galimage::audit;

namespace {

const ReducibilityTarget* with_psi2(const std::vector<ReducibilityTarget>& ts, u64 value) {
  for (const auto& t : ts) {
    if (t.field().degree() == 1 && t.psi_at(2).prime_value() == value) return &t;
  }
  return nullptr;
}

// Discrete log base g modulo m by enumeration.
u64 dlog(u64 g, u64 a, u64 m) {
  u64 x = 1;
  for (u64 k = 0; k < m; ++k) {
    if (x == a % m) return k;
    x = x * g % m;
  }
  ADD_FAILURE() << a << " not a power of " << g << " mod " << m;
  return 0;
}

}  // namespace

TEST(Targets, OrdersPerFamily) {
  EXPECT_EQ(target_orders(FamilyMember::make(4)), (std::vector<u64>{3, 6}));
  EXPECT_EQ(target_orders(FamilyMember::make(6)), (std::vector<u64>{9, 18}));
  EXPECT_EQ(target_orders(FamilyMember::make(4, 2, 5)), (std::vector<u64>{5, 10, 20}));
}

TEST(Targets, SevenAtLevel162) {
  const auto ts = build_targets(4, 7);
  std::multiset<std::pair<u64, u64>> got;  // (order, psi(2))
  for (const auto& t : ts) {
    ASSERT_EQ(t.field().degree(), 1u);
    got.insert({t.order(), t.psi_at(2).prime_value()});
  }
  EXPECT_EQ(got, (std::multiset<std::pair<u64, u64>>{{3, 2}, {3, 4}, {6, 3}, {6, 5}}));
  const auto* t3 = with_psi2(ts, 3);
  ASSERT_NE(t3, nullptr);
  const auto [x, y] = t3->pair_at_s();
  EXPECT_EQ(std::set<u64>({x.prime_value(), y.prime_value()}), (std::set<u64>{6, 5}));
}

TEST(Targets, FiveNeedsQuadraticExtension) {
  const auto ts = build_targets(4, 5);
  ASSERT_FALSE(ts.empty());
  for (const auto& t : ts) EXPECT_EQ(t.field().degree(), 2u);
}

// psi against an independent model: psi(g^k) = zeta^k with g the least primitive root mod 3^u.
TEST(Targets, CharacterOracle) {
  for (unsigned n : {4u, 6u}) {
    const auto m = FamilyMember::make(n);
    const u64 mod = ipow(3, m.u());
    const u64 g = least_primitive_root(mod);
    for (u64 ell : {5u, 7u, 13u, 19u, 37u}) {
      for (const auto& t : build_targets(m, ell)) {
        const auto zeta = t.psi_at(g);
        EXPECT_EQ(zeta.order(), t.order());
        EXPECT_FALSE(t.psi_at(1 + mod / 3) == t.one()) << "conductor drops";
        for (u64 a = 1; a < mod; ++a) {
          if (a % 3 == 0) continue;
          EXPECT_EQ(t.psi_at(a), zeta.pow(dlog(g, a, mod)));
        }
        EXPECT_EQ(t.trace_at(2), FieldElement::from_int(t.field(), 2) * t.psi_at(2) + t.psi_at(2).inverse());
      }
    }
  }
}

TEST(Targets, DeterminantIsP) {
  for (unsigned n : {4u, 6u}) {
    const auto m = FamilyMember::make(n);
    for (u64 ell : {5u, 7u, 11u, 19u, 73u}) {
      for (const auto& t : build_targets(m, ell)) {
        for (u64 p : modsym::primes_up_to(modsym::sturm_bound(static_cast<u64>(m.level())))) {
          if (p == 3 || p == ell) continue;
          EXPECT_EQ(t.determinant_at(p), FieldElement::from_int(t.field(), static_cast<i64>(p)));
        }
      }
    }
  }
}

TEST(Consistency, Examples) {
  const auto ts = build_targets(4, 7);
  auto c3 = semistable_consistency(*with_psi2(ts, 3));
  EXPECT_TRUE(c3.consistent);
  EXPECT_EQ(c3.branch, Branch::minus);
  EXPECT_FALSE(semistable_consistency(*with_psi2(ts, 5)).consistent);
  auto c4 = semistable_consistency(*with_psi2(ts, 4));
  EXPECT_TRUE(c4.consistent);
  EXPECT_EQ(c4.branch, Branch::plus);
  EXPECT_FALSE(semistable_consistency(*with_psi2(ts, 2)).consistent);
}

// Independent description: consistent iff psi(2) in {1/2, -1/2, -1}.
TEST(Consistency, BranchOracleAndExclusivity) {
  for (unsigned n : {4u, 6u}) {
    for (u64 ell = 5; ell < 200; ++ell) {
      if (!is_prime(ell)) continue;
      for (const auto& t : build_targets(FamilyMember::make(n), ell)) {
        const auto w = t.psi_at(2);
        const auto half = FieldElement::from_int(t.field(), 2).inverse();
        const auto c = semistable_consistency(t);
        EXPECT_EQ(c.consistent, w == half || w == -half || w == -t.one());
        EXPECT_EQ(c.consistent, c.branch != Branch::none);
        if (w == half) { EXPECT_EQ(c.branch, Branch::plus); }
        if (w == -half || w == -t.one()) { EXPECT_EQ(c.branch, Branch::minus); }
      }
    }
  }
}

TEST(Audit, SevenWitnessAtLevel162) {
  const auto v = reducibility_audit(4, 7);
  EXPECT_EQ(v.level, 162u);
  EXPECT_EQ(v.sturm, 54u);
  EXPECT_TRUE(v.candidate);
  EXPECT_EQ(v.outcome, Outcome::witness_found);
  ASSERT_FALSE(v.witnesses.empty());
  const auto dec = modsym::eigensystems_mod_ell(162, 7);
  // Twisting by the quadratic character mod 3 keeps the level and swaps the two branches,
  // so both show up: psi(2) = 3 on {-1,-2} and psi(2) = 4 on {1,2}.
  std::set<std::pair<u64, u64>> seen;  // (psi(2), a_2)
  for (const auto& w : v.witnesses) {
    const auto& t = v.targets[w.target];
    const auto& e = dec.systems[w.system];
    seen.insert({t.psi_at(2).prime_value(), e.a(2).prime_value()});
    for (u64 p : v.checked_primes) EXPECT_EQ(e.a(p), t.trace_at(p)) << p;
  }
  EXPECT_EQ(seen, (std::set<std::pair<u64, u64>>{{3, 6}, {4, 1}}));
  for (u64 p : v.checked_primes) EXPECT_TRUE(p != 2 && p != 3 && p != 7 && p <= 54);
}

TEST(Audit, NonCandidatesAtLevel162) {
  for (u64 ell : {11u, 13u, 5u}) {
    const auto v = reducibility_audit(4, ell);
    EXPECT_FALSE(v.candidate);
    EXPECT_TRUE(v.computed);
    EXPECT_EQ(v.outcome, Outcome::not_a_candidate) << ell;
    EXPECT_TRUE(v.witnesses.empty());
  }
}

TEST(Audit, InconsistentTargetsNeverMatch) {
  const auto v = reducibility_audit(4, 7);
  for (const auto& c : v.comparisons) EXPECT_TRUE(semistable_consistency(v.targets[c.target]).consistent);
  for (const auto& t : v.targets) {
    if (!semistable_consistency(t).consistent) {
      for (const auto& w : v.witnesses) EXPECT_NE(w.target, t.id);
    }
  }
}

TEST(Audit, SoundnessCoupling) {
  const auto m = FamilyMember::make(4);
  for (u64 ell = 5; ell <= 43; ++ell) {
    if (!is_prime(ell)) continue;
    const auto v = reducibility_audit(m, ell);
    if (v.outcome == Outcome::witness_found) { EXPECT_TRUE(is_reducible_candidate(m, ell)) << ell; }
    if (v.outcome == Outcome::refuted_up_to_sturm) {
      for (const auto& c : v.comparisons) EXPECT_NE(c.refuting_prime, 0u);
    }
  }
}

TEST(Audit, DeterministicAcrossWorkers) {
  const auto m = FamilyMember::make(4);
  const std::vector<u64> ells{5, 7, 11, 13, 17};
  const auto a = reducibility_audits(m, ells, 1);
  const auto b = reducibility_audits(m, ells, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].ell, ells[i]);
    EXPECT_EQ(a[i].outcome, b[i].outcome);
    ASSERT_EQ(a[i].comparisons.size(), b[i].comparisons.size());
    for (std::size_t j = 0; j < a[i].comparisons.size(); ++j) {
      EXPECT_EQ(a[i].comparisons[j].matched, b[i].comparisons[j].matched);
      EXPECT_EQ(a[i].comparisons[j].refuting_prime, b[i].comparisons[j].refuting_prime);
    }
  }
}

TEST(Audit, Guardrails) {
  EXPECT_THROW(reducibility_audit(8, 7), Error);
  EXPECT_THROW(reducibility_audit(5, 7), Error);
  EXPECT_THROW(reducibility_audit(4, 3), Error);
  EXPECT_THROW(reducibility_audit(4, 9), Error);
  AuditOptions wide;
  wide.compute_non_candidates = false;
  const auto v = reducibility_audit(4, 11, wide);
  EXPECT_FALSE(v.computed);
  EXPECT_EQ(v.outcome, Outcome::not_a_candidate);
}

TEST(Dihedral, NoDihedralPatternAtLevel162) {
  for (u64 ell : {5u, 7u, 11u}) {
    const auto r = dihedral_spotcheck(FamilyMember::make(4), ell);
    EXPECT_FALSE(r.entries.empty());
    EXPECT_FALSE(r.any_dihedral()) << ell;
    // a_2 = +-1 never vanishes, so 2 is always the first witness.
    for (const auto& e : r.entries) EXPECT_EQ(e.witness_prime, 2u);
  }
}

TEST(Audit, NineteenAtLevel1458) {
  const auto v = reducibility_audit(6, 19);
  EXPECT_EQ(v.level, 1458u);
  EXPECT_TRUE(v.candidate);
  EXPECT_EQ(v.outcome, Outcome::witness_found);
  for (const auto& w : v.witnesses) EXPECT_EQ(v.targets[w.target].order() % 9, 0u);
  // Congruent newforms make some Hecke components non-semisimple; they are reported, not fatal.
  for (const auto& c : v.caveats) EXPECT_NE(c.find("not semisimple"), std::string::npos) << c;
}
