#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "galimage/numth.hpp"

namespace galimage {

/// A level s * t^n of the family: s the semistable prime, t the wild prime.
struct FamilyMember {
  u64 s = 2;
  u64 t = 3;
  unsigned n = 4;

  /// Validates: s != t prime, t odd, n >= 4, s a primitive root mod t^2 (hence mod every
  /// t^u) and a non-residue mod t.
  static FamilyMember make(unsigned n, u64 s = 2, u64 t = 3) {
    require(is_prime(s), "family: s must be prime");
    require(is_prime(t) && t > 2, "family: t must be an odd prime");
    require(s != t, "family: s and t must differ");
    require(n >= 4, "family: n must be at least 4");
    require(ipow(t, 2) < (1ULL << 32), "family: t too large");
    require(is_primitive_root(static_cast<i64>(s % (t * t)), t * t), "family: s must be a primitive root mod t^2");
    require(quadratic_residue_symbol(static_cast<i64>(s), t) == -1, "family: s must be a non-residue mod t");
    return FamilyMember{s, t, n};
  }

  BigInt level() const { return BigInt(s) * big_pow(t, n); }
  bool even() const { return n % 2 == 0; }
  /// Half the level exponent; only defined for even n.
  unsigned u() const {
    require(even(), "family: the reducible-prime bound is only available for even n (n = 2u); got n = " +
                        std::to_string(n) + ". The reducible shape has conductor cond(psi)^2 at t, an even power.");
    return n / 2;
  }

  friend bool operator==(const FamilyMember&, const FamilyMember&) = default;
};

/// One step in the justification trail of a classification.
struct Justification {
  std::string rule;
  std::string detail;
  bool trusted = false;  // taken from the literature rather than derived from the level
};

struct TrustedRule {
  std::string id;
  std::string statement;
};

/// The imported results the classification depends on, stated in plain terms.
inline const std::vector<TrustedRule>& trusted_rules() {
  static const std::vector<TrustedRule> rules{
      {"non-cm",
       "A newform of level s*t^n with s exactly dividing the level is semistable at s, hence has no complex "
       "multiplication."},
      {"level-raising",
       "If the residual representation is unramified at a prime s exactly dividing the level, then the "
       "Frobenius trace at s is congruent to +-(s+1) mod ell, with Frobenius eigenvalues eps*{1, s} where "
       "eps = +-1 is the U_s eigenvalue."},
      {"residual-conductor",
       "For ell > 3 the residual representation keeps the full conductor t^n at the wild prime t."},
      {"dihedral-induction",
       "A dihedral residual image must be induced from the quadratic field ramified only at t, and is then "
       "unramified at s (no unipotent elements)."},
      {"small-image-weight2",
       "The projective images A4, S4, A5 do not occur in weight 2 for ell >= 7."},
      {"small-image-ell5",
       "For ell = 5 the exceptional projective images A4, S4, A5 are excluded by the large wild ramification "
       "at t; for small n this is taken on trust."},
      {"large-image",
       "Outside the reducible, dihedral and small-image cases the residual image contains SL2 of its field "
       "of definition."},
  };
  return rules;
}

struct CandidateSet {
  std::vector<BigInt> primes;  // sorted
  bool complete = true;        // false when the factorization below was partial
  BigInt bound_number;         // s^{(t-1) t^{u-1}} - 1
  u64 congruence_modulus = 1;  // t^{u-1}
  Factorization factorization;
};

/// Membership test for the reducible bound, without factoring:
/// ell > t, ell != s, t^{u-1} | ell - 1, and s^{(t-1) t^{u-1}} = 1 mod ell.
inline bool is_reducible_candidate(const FamilyMember& m, u64 ell) {
  const unsigned u = m.u();
  if (!is_prime(ell) || ell <= m.t || ell == m.s || ell <= 3) return false;
  const BigInt tu1 = big_pow(m.t, u - 1);
  if ((BigInt(ell) - 1) % tu1 != 0) return false;
  const BigInt exponent = BigInt(m.t - 1) * tu1;
  return mod_pow(BigInt(m.s), exponent, BigInt(ell)) == 1;
}

/// Primes that the reducible bound cannot exclude, from the factorization of
/// s^{(t-1) t^{u-1}} - 1 filtered by t^{u-1} | ell - 1.
inline CandidateSet reducible_candidates(const FamilyMember& m, const FactorOptions& opts = {}) {
  const unsigned u = m.u();
  CandidateSet out;
  const BigInt tu1 = big_pow(m.t, u - 1);
  out.congruence_modulus = tu1 <= BigInt(std::numeric_limits<u64>::max()) ? static_cast<u64>(tu1) : 0;
  out.bound_number = boost::multiprecision::pow(BigInt(m.s), static_cast<unsigned>((m.t - 1) * tu1)) - 1;
  out.factorization = factorize(out.bound_number, opts);
  out.complete = out.factorization.complete();
  for (const auto& pp : out.factorization.factors) {
    const BigInt& ell = pp.prime;
    if (ell <= m.t || ell == m.s || ell <= 3) continue;
    if ((ell - 1) % tu1 != 0) continue;
    out.primes.push_back(ell);
  }
  return out;
}

/// Primes ell > 3 dividing s + 1: the only ones where a zero trace at s can agree with +-(s+1).
inline std::vector<u64> dihedral_candidates(const FamilyMember& m) {
  require(quadratic_residue_symbol(static_cast<i64>(m.s), m.t) == -1,
          "dihedral_candidates: s is a square mod t, the argument does not apply (unbounded by this method)");
  std::vector<u64> out;
  for (auto [p, e] : factor_u64(m.s + 1)) {
    if (p > 3 && p != m.t) out.push_back(p);
  }
  return out;
}

enum class SmallImageBasis { weight_two_rule, wild_inertia, trusted_claim, out_of_scope };

inline const char* to_string(SmallImageBasis b) {
  switch (b) {
    case SmallImageBasis::weight_two_rule: return "weight-2-rule";
    case SmallImageBasis::wild_inertia: return "wild-inertia";
    case SmallImageBasis::trusted_claim: return "trusted-claim";
    case SmallImageBasis::out_of_scope: return "out-of-scope";
  }
  return "unknown";
}

struct ExclusionStatus {
  bool excluded = false;
  bool trusted = false;
  SmallImageBasis basis = SmallImageBasis::out_of_scope;
  std::string justification;
};

/// Whether the A4/S4/A5 projective images can be ruled out at ell.
inline ExclusionStatus small_image_exclusion(u64 ell, const FamilyMember& m) {
  if (ell <= 3) return {false, false, SmallImageBasis::out_of_scope, "ell <= 3 is outside the scope of the bound"};
  if (ell >= 7) {
    return {true, true, SmallImageBasis::weight_two_rule,
            "A4/S4/A5 projective images do not occur in weight 2 for ell >= 7"};
  }
  // ell = 5: wild inertia at t has image of order t^{floor(n/2)-1} in the projective group.
  const unsigned half = m.n / 2;
  const BigInt wild = big_pow(m.t, half - 1);
  const std::string w = std::to_string(m.t) + "^" + std::to_string(half - 1) + " = " + wild.str();
  if (wild > 5) {
    return {true, false, SmallImageBasis::wild_inertia,
            "wild inertia order " + w + " > 5, the largest element order in A4/S4/A5"};
  }
  return {true, true, SmallImageBasis::trusted_claim,
          "wild inertia order " + w + " <= 5; exclusion taken on trust for this n"};
}

/// Dirichlet density 1/phi(t^{u-1}) of the primes ell = 1 mod t^{u-1}.
inline Rational density_upper_bound(const FamilyMember& m) {
  const unsigned u = m.u();
  const BigInt tu1 = big_pow(m.t, u - 1);
  const BigInt phi = u == 1 ? BigInt(1) : tu1 / m.t * (m.t - 1);
  return Rational(BigInt(1), phi);
}

/// Order of ell in (Z/t^{c-1})^* / {+-1} with c = ceil(n/2).
inline u64 field_exponent_lower_bound(u64 ell, unsigned n, u64 t = 3) {
  require(is_prime(ell) && ell > 3 && ell != t, "field_exponent_lower_bound: ell must be a prime > 3, ell != t");
  require(n >= 4, "field_exponent_lower_bound: n must be at least 4");
  const unsigned c = (n + 1) / 2;
  const u64 m = ipow(t, c - 1);
  if (m <= 2) return 1;
  const u64 x = ell % m;
  u64 acc = x;
  for (u64 e = 1;; ++e) {
    if (acc == 1 || acc == m - 1) return e;
    acc = mul_mod(acc, x, m);
  }
}

/// Degree of the real subfield of Q(zeta_{t^{c-1}}), c = ceil(n/2).
inline u64 coefficient_degree_lower_bound(unsigned n, u64 t = 3) {
  require(n >= 4, "coefficient_degree_lower_bound: n must be at least 4");
  const unsigned c = (n + 1) / 2;
  const u64 phi = euler_phi(ipow(t, c - 1));
  return std::max<u64>(1, phi / 2);
}

struct RealizationPlan {
  u64 ell = 0;
  u64 r0 = 0;
  unsigned n = 0;
  u64 r = 0;  // guaranteed exponent, >= r0
  FamilyMember member;
  std::string ramification;
};

/// Smallest even n >= 4 at which ell is not a reducible candidate and the residual
/// field exponent bound reaches r0.
inline RealizationPlan realization_plan(u64 ell, u64 r0, u64 s = 2, u64 t = 3) {
  require(is_prime(ell) && ell > 3 && ell != s && ell != t, "realization_plan: ell must be a prime > 3 not in {s, t}");
  require(r0 >= 1, "realization_plan: r0 must be positive");
  for (unsigned n = 4;; n += 2) {
    const auto m = FamilyMember::make(n, s, t);
    if (is_reducible_candidate(m, ell)) continue;
    const u64 r = field_exponent_lower_bound(ell, n, t);
    if (r < r0) continue;
    return RealizationPlan{ell, r0, n, r, m,
                           "extension unramified outside " + std::to_string(s * t) + "*" + std::to_string(ell) +
                               " (primes " + std::to_string(s) + ", " + std::to_string(t) + ", " +
                               std::to_string(ell) + ")"};
  }
}

enum class PrimeStatus { reducible_candidate, dihedral_candidate, large_guaranteed, out_of_scope };

inline const char* to_string(PrimeStatus s) {
  switch (s) {
    case PrimeStatus::reducible_candidate: return "reducible-candidate";
    case PrimeStatus::dihedral_candidate: return "dihedral-candidate";
    case PrimeStatus::large_guaranteed: return "large-guaranteed";
    case PrimeStatus::out_of_scope: return "out-of-scope";
  }
  return "unknown";
}

struct PrimeEntry {
  u64 ell = 0;
  PrimeStatus status = PrimeStatus::out_of_scope;
  std::vector<Justification> trail;
  bool trusted() const {
    return std::any_of(trail.begin(), trail.end(), [](const Justification& j) { return j.trusted; });
  }
};

struct ExceptionalReport {
  FamilyMember member;
  u64 ell_max = 1000;
  std::vector<PrimeEntry> entries;
  CandidateSet reducible;
  std::vector<u64> dihedral;
  Rational density;
  std::vector<std::string> assumptions;  // ids into trusted_rules()
  bool complete() const { return reducible.complete; }
};

/// Classification of one prime, used by family_report.
inline PrimeEntry classify_prime(const FamilyMember& m, u64 ell, const std::vector<u64>& dihedral) {
  PrimeEntry e{ell, PrimeStatus::out_of_scope, {}};
  if (ell <= 3 || ell == m.s || ell == m.t) {
    e.trail.push_back({"scope", "ell <= 3 or ell divides the level: the arguments assume ell > 3, ell not in {s, t}",
                       false});
    return e;
  }
  const unsigned u = m.u();
  const std::string tu1 = std::to_string(m.t) + "^" + std::to_string(u - 1);
  const std::string bound = std::to_string(m.s) + "^(" + std::to_string(m.t - 1) + "*" + tu1 + ") - 1";
  if (is_reducible_candidate(m, ell)) {
    e.status = PrimeStatus::reducible_candidate;
    e.trail.push_back({"reducible-bound", "ell = 1 mod " + tu1 + " and ell divides " + bound, false});
    return e;
  }
  const bool cong = (ell - 1) % ipow(m.t, u - 1) == 0;
  e.trail.push_back({"reducible-excluded",
                     cong ? "ell does not divide " + bound : "ell != 1 mod " + tu1 + ", so psi(s) cannot lie in F_ell",
                     false});
  if (std::find(dihedral.begin(), dihedral.end(), ell) != dihedral.end()) {
    e.status = PrimeStatus::dihedral_candidate;
    e.trail.push_back({"dihedral-bound", "ell divides s + 1 = " + std::to_string(m.s + 1) +
                                             ", so a zero trace at s agrees with +-(s+1)",
                       false});
    return e;
  }
  e.trail.push_back({"dihedral-excluded",
                     "trace at s must be 0 (s inert in the quadratic field) and +-(s+1) (level raising); ell does not "
                     "divide s + 1 = " + std::to_string(m.s + 1),
                     false});
  const auto small = small_image_exclusion(ell, m);
  e.trail.push_back({"small-image-excluded", std::string(to_string(small.basis)) + ": " + small.justification,
                     small.trusted});
  e.status = PrimeStatus::large_guaranteed;
  return e;
}

/// Classifies every prime up to ell_max and records the global candidate sets.
inline ExceptionalReport family_report(const FamilyMember& m, u64 ell_max = 1000, const FactorOptions& opts = {}) {
  m.u();  // odd n rejected here
  ExceptionalReport r;
  r.member = m;
  r.ell_max = ell_max;
  r.reducible = reducible_candidates(m, opts);
  r.dihedral = dihedral_candidates(m);
  r.density = density_upper_bound(m);
  r.assumptions = {"non-cm", "level-raising", "residual-conductor", "dihedral-induction", "small-image-weight2",
                   "small-image-ell5", "large-image"};
  for (u64 ell = 2; ell <= ell_max; ++ell) {
    if (is_prime(ell)) r.entries.push_back(classify_prime(m, ell, r.dihedral));
  }
  return r;
}

}  // namespace galimage
