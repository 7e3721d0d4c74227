#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "galimage/bounds.hpp"
#include "galimage/modsym.hpp"
#include "galimage/numth/character.hpp"

namespace galimage::audit {

using modsym::EigenDecomposition;
using modsym::Eigensystem;

/// Residual pair chi*psi + psi^{-1} for a character psi of conductor exactly t^u.
struct ReducibilityTarget {
  std::size_t id = 0;
  FamilyMember member;
  u64 ell = 0;
  DirichletCharacter psi;

  u64 order() const { return psi.order(); }
  const GaloisField& field() const { return psi.field(); }
  FieldElement one() const { return FieldElement::from_int(field(), 1); }

  FieldElement psi_at(u64 p) const { return psi(static_cast<i64>(p)); }
  /// p psi(p) + psi^{-1}(p), for p not dividing t * ell.
  FieldElement trace_at(u64 p) const {
    const auto v = psi_at(p);
    return FieldElement::from_int(field(), static_cast<i64>(p % ell)) * v + v.inverse();
  }
  FieldElement determinant_at(u64 p) const {
    const auto v = psi_at(p);
    return (FieldElement::from_int(field(), static_cast<i64>(p % ell)) * v) * v.inverse();
  }
  /// The two eigenvalues {s psi(s), psi(s)^{-1}} at the semistable prime s.
  std::pair<FieldElement, FieldElement> pair_at_s() const {
    const auto v = psi_at(member.s);
    return {FieldElement::from_int(field(), static_cast<i64>(member.s)) * v, v.inverse()};
  }
  FieldElement trace_at_s() const {
    const auto [x, y] = pair_at_s();
    return x + y;
  }
};

/// Orders d * t^(u-1) with d | t - 1 (both 3^(u-1) and 2 * 3^(u-1) when t = 3).
inline std::vector<u64> target_orders(const FamilyMember& m) {
  const u64 base = ipow(m.t, m.u() - 1);
  std::vector<u64> out;
  for (u64 d = 1; d <= m.t - 1; ++d) {
    if ((m.t - 1) % d == 0 && d * base > 1) out.push_back(d * base);
  }
  return out;
}

inline std::vector<ReducibilityTarget> build_targets(const FamilyMember& m, u64 ell) {
  require(is_prime(ell) && ell > 3, "build_targets: ell must be a prime > 3");
  require(ell != m.s && ell != m.t, "build_targets: ell must not divide the level");
  std::vector<ReducibilityTarget> out;
  for (u64 order : target_orders(m)) {
    for (auto& psi : character_of_conductor(m.t, m.u(), ell, order)) {
      out.push_back({out.size(), m, ell, std::move(psi)});
    }
  }
  return out;
}

inline std::vector<ReducibilityTarget> build_targets(unsigned n, u64 ell) {
  return build_targets(FamilyMember::make(n), ell);
}

enum class Branch { none, plus, minus };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::plus: return "{1,s}";
    case Branch::minus: return "{-1,-s}";
    default: return "none";
  }
}

struct Consistency {
  bool consistent = false;
  Branch branch = Branch::none;
};

/// Whether {s psi(s), psi(s)^{-1}} is {1, s} or {-1, -s}.
inline Consistency semistable_consistency(const ReducibilityTarget& t) {
  const auto [x, y] = t.pair_at_s();
  const auto& f = t.field();
  const auto one = FieldElement::from_int(f, 1);
  const auto s = FieldElement::from_int(f, static_cast<i64>(t.member.s));
  auto same = [](const FieldElement& a, const FieldElement& b, const FieldElement& c, const FieldElement& d) {
    return (a == c && b == d) || (a == d && b == c);
  };
  if (same(x, y, one, s)) return {true, Branch::plus};
  if (same(x, y, -one, -s)) return {true, Branch::minus};
  return {};
}

enum class Outcome { witness_found, refuted_up_to_sturm, not_a_candidate };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::witness_found: return "witness-found";
    case Outcome::refuted_up_to_sturm: return "refuted-up-to-Sturm";
    default: return "not-a-candidate";
  }
}

/// Comparison of one eigensystem against one target.
struct PairResult {
  std::size_t system = 0;
  std::size_t target = 0;
  bool matched = false;
  unsigned conjugate = 0;       // Frobenius power of the system that matched
  u64 refuting_prime = 0;       // largest first-mismatch prime over all conjugates; 0 when matched
};

struct AuditVerdict {
  FamilyMember member;
  u64 level = 0;
  u64 ell = 0;
  u64 sturm = 0;
  bool candidate = false;  // ell passes the closed-form reducibility test
  bool computed = false;   // eigensystems were compared
  Outcome outcome = Outcome::not_a_candidate;
  std::vector<ReducibilityTarget> targets;
  std::vector<std::size_t> consistent_targets;
  std::vector<u64> checked_primes;  // p <= Sturm bound, p not dividing s t ell
  std::size_t systems = 0;
  std::vector<PairResult> comparisons;
  std::vector<PairResult> witnesses;
  std::vector<std::string> caveats;
};

struct AuditOptions {
  unsigned max_n = 6;                 // desk-scale guardrail
  bool compute_non_candidates = true;  // still compare eigensystems when the bound excludes ell
};

namespace detail {

inline PairResult compare(const Eigensystem& e, const ReducibilityTarget& t, const std::vector<u64>& primes) {
  PairResult r{e.id, t.id};
  const unsigned k = std::lcm(e.degree, t.field().degree());
  const GaloisField big(e.ell, k);
  std::vector<FieldElement> sys, tgt;
  for (u64 p : primes) {
    sys.push_back(embed(e.a(p), big));
    tgt.push_back(embed(t.trace_at(p), big));
  }
  const auto [x, y] = t.pair_at_s();
  const auto ex = embed(x, big), ey = embed(y, big);
  const auto us = embed(e.a(t.member.s), big);
  u64 worst = 0;
  for (unsigned j = 0; j < k; ++j) {
    u64 first = 0;
    const auto uj = frobenius_power(us, j);
    if (!(uj == ex || uj == ey)) first = t.member.s;
    for (std::size_t i = 0; i < primes.size() && first == 0; ++i) {
      if (!(frobenius_power(sys[i], j) == tgt[i])) first = primes[i];
    }
    if (first == 0) {
      r.matched = true;
      r.conjugate = j;
      r.refuting_prime = 0;
      return r;
    }
    worst = std::max(worst, first);
  }
  r.refuting_prime = worst;
  return r;
}

}  // namespace detail

namespace detail {

inline void check_scale(const FamilyMember& m, u64 ell, const AuditOptions& opts, const char* who) {
  require(m.even(), std::string(who) + ": n must be even (the character conductor is t^(n/2))");
  if (m.n > opts.max_n) {
    fail(ErrorKind::invalid_input, std::string(who) + ": n = " + std::to_string(m.n) + " exceeds the desk-scale limit " +
                                       std::to_string(opts.max_n) + " (level " + m.level().str() + ")");
  }
  require(is_prime(ell) && ell > 3, std::string(who) + ": ell must be a prime > 3");
  require(ell != m.s && ell != m.t, std::string(who) + ": ell must not divide the level");
}

inline AuditVerdict prepare(const FamilyMember& m, u64 ell) {
  AuditVerdict v;
  v.member = m;
  v.level = static_cast<u64>(m.level());
  v.ell = ell;
  v.sturm = modsym::sturm_bound(v.level);
  v.candidate = is_reducible_candidate(m, ell);
  v.targets = build_targets(m, ell);
  for (const auto& t : v.targets) {
    if (semistable_consistency(t).consistent) v.consistent_targets.push_back(t.id);
  }
  for (u64 p : modsym::primes_up_to(v.sturm)) {
    if (p != m.s && p != m.t && p != ell) v.checked_primes.push_back(p);
  }
  return v;
}

}  // namespace detail

/// Audit against an already computed decomposition at level s t^n mod ell.
inline AuditVerdict reducibility_audit(const FamilyMember& m, const EigenDecomposition& dec,
                                       const AuditOptions& opts = {}) {
  detail::check_scale(m, dec.ell, opts, "reducibility_audit");
  AuditVerdict v = detail::prepare(m, dec.ell);
  require(dec.level == v.level, "reducibility_audit: decomposition is for another level");
  v.computed = true;
  v.systems = dec.systems.size();
  for (const auto& issue : dec.issues) v.caveats.push_back(issue);
  require(dec.bound >= v.sturm, "reducibility_audit: eigensystems stop below the Sturm bound");
  for (const auto& e : dec.systems) {
    for (std::size_t ti : v.consistent_targets) {
      auto r = detail::compare(e, v.targets[ti], v.checked_primes);
      if (r.matched) v.witnesses.push_back(r);
      v.comparisons.push_back(r);
    }
  }
  if (!v.witnesses.empty()) {
    v.outcome = Outcome::witness_found;
    if (!v.candidate) v.caveats.push_back("witness found although the closed-form test excludes ell");
  } else if (!v.candidate) {
    v.outcome = Outcome::not_a_candidate;
  } else {
    v.outcome = Outcome::refuted_up_to_sturm;
    v.caveats.push_back("refutation compares only primes not dividing " + std::to_string(m.s * m.t * dec.ell) +
                        " up to the Sturm bound, plus the U_" + std::to_string(m.s) + " eigenvalue");
  }
  return v;
}

/// Compares the mod-ell eigensystems of the new subspace at level s t^n with every
/// semistable-consistent reducible target, at p <= Sturm bound with p not dividing s t ell,
/// plus membership of the U_s eigenvalue in the target pair.
inline AuditVerdict reducibility_audit(const FamilyMember& m, u64 ell, const AuditOptions& opts = {}) {
  detail::check_scale(m, ell, opts, "reducibility_audit");
  if (!is_reducible_candidate(m, ell) && !opts.compute_non_candidates) {
    AuditVerdict v = detail::prepare(m, ell);
    v.outcome = Outcome::not_a_candidate;
    return v;
  }
  return reducibility_audit(m, modsym::eigensystems_mod_ell(static_cast<u64>(m.level()), ell), opts);
}

inline AuditVerdict reducibility_audit(unsigned n, u64 ell, const AuditOptions& opts = {}) {
  return reducibility_audit(FamilyMember::make(n), ell, opts);
}

/// Audits for several ell on `workers` threads; results in the order of `ells`.
inline std::vector<AuditVerdict> reducibility_audits(const FamilyMember& m, const std::vector<u64>& ells,
                                                     unsigned workers = 1, const AuditOptions& opts = {}) {
  std::vector<std::optional<AuditVerdict>> slots(ells.size());
  std::vector<std::string> errors(ells.size());
  auto job = [&](std::size_t start, std::size_t step) {
    for (std::size_t i = start; i < ells.size(); i += step) {
      try {
        slots[i] = reducibility_audit(m, ells[i], opts);
      } catch (const std::exception& ex) {
        errors[i] = ex.what();
      }
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(ells.size(), 1))));
  if (workers == 1) {
    job(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(job, w, workers);
    for (auto& t : pool) t.join();
  }
  std::vector<AuditVerdict> out;
  for (std::size_t i = 0; i < ells.size(); ++i) {
    if (!slots[i]) fail(ErrorKind::invalid_input, "reducibility_audits: ell = " + std::to_string(ells[i]) + ": " + errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

struct DihedralEntry {
  std::size_t system = 0;
  bool dihedral_pattern = false;  // a_p = 0 at every checked p inert in Q(sqrt(-3))
  u64 witness_prime = 0;          // first checked p with a_p != 0
};

struct DihedralReport {
  FamilyMember member;
  u64 level = 0;
  u64 ell = 0;
  std::vector<u64> checked_primes;  // p = 2 mod 3, p <= Sturm bound, p != ell
  std::vector<DihedralEntry> entries;
  std::vector<std::string> caveats;
  bool any_dihedral() const {
    return std::any_of(entries.begin(), entries.end(), [](const DihedralEntry& e) { return e.dihedral_pattern; });
  }
};

/// Necessary trace condition for a representation induced from Q(sqrt(-3)).
inline DihedralReport dihedral_spotcheck(const FamilyMember& m, const EigenDecomposition& dec,
                                         const AuditOptions& opts = {}) {
  detail::check_scale(m, dec.ell, opts, "dihedral_spotcheck");
  DihedralReport r;
  r.member = m;
  r.level = static_cast<u64>(m.level());
  r.ell = dec.ell;
  require(dec.level == r.level, "dihedral_spotcheck: decomposition is for another level");
  for (u64 p : modsym::primes_up_to(modsym::sturm_bound(r.level))) {
    if (p % 3 == 2 && p != r.ell) r.checked_primes.push_back(p);
  }
  r.caveats = dec.issues;
  for (const auto& e : dec.systems) {
    DihedralEntry d{e.id, true, 0};
    for (u64 p : r.checked_primes) {
      if (!e.a(p).is_zero()) {
        d.dihedral_pattern = false;
        d.witness_prime = p;
        break;
      }
    }
    r.entries.push_back(d);
  }
  return r;
}

inline DihedralReport dihedral_spotcheck(const FamilyMember& m, u64 ell, const AuditOptions& opts = {}) {
  detail::check_scale(m, ell, opts, "dihedral_spotcheck");
  return dihedral_spotcheck(m, modsym::eigensystems_mod_ell(static_cast<u64>(m.level()), ell), opts);
}

}  // namespace galimage::audit
