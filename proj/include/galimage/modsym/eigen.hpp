#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "galimage/modsym/space.hpp"
#include "galimage/numth/galois.hpp"

namespace galimage::modsym {

/// One Galois orbit of simultaneous eigenvalues mod ell, represented by a chosen member.
struct Eigensystem {
  std::size_t id = 0;
  u64 level = 0;
  u64 ell = 0;
  unsigned degree = 1;  // k with all a_p in F_{ell^k}, minimal
  u64 sturm = 0;
  std::vector<u64> primes;                          // ascending, p <= bound, p != ell
  std::vector<FieldElement> eigenvalues;           // a_p (U_p eigenvalue for p | N)
  std::vector<Poly<PrimeField>> minimal_polynomials;  // of a_p over F_ell
  std::size_t dimension = 0;                        // F_ell-dimension of the generalized piece
  std::size_t multiplicity = 0;                     // dimension / degree
  std::size_t eigenspace_dim = 0;                   // joint eigenspace over F_{ell^k}
  bool semisimple = true;

  const GaloisField& field() const { return eigenvalues.front().field(); }
  bool has(u64 p) const { return std::binary_search(primes.begin(), primes.end(), p); }
  const FieldElement& a(u64 p) const {
    auto it = std::lower_bound(primes.begin(), primes.end(), p);
    require(it != primes.end() && *it == p, "Eigensystem: prime not computed");
    return eigenvalues[static_cast<std::size_t>(it - primes.begin())];
  }
};

struct EigenDecomposition {
  u64 level = 0;
  u64 ell = 0;
  u64 bound = 0;
  std::size_t new_dimension = 0;           // over F_ell
  std::size_t expected_new_dimension = 0;  // 2 * dim of weight-2 newforms, from the genus oracle
  std::vector<Eigensystem> systems;
  std::vector<std::string> issues;

  bool dimension_matches() const { return new_dimension == expected_new_dimension; }
  bool semisimple() const {
    return std::all_of(systems.begin(), systems.end(), [](const Eigensystem& e) { return e.semisimple; });
  }
  std::size_t total_dimension() const {
    std::size_t s = 0;
    for (const auto& e : systems) s += e.dimension;
    return s;
  }
};

/// Hecke operators restricted to one subspace, for a list of primes.
template <class F>
struct HeckeFamily {
  std::vector<u64> primes;
  std::vector<Matrix<F>> matrices;

  const Matrix<F>& at(u64 p) const {
    auto it = std::lower_bound(primes.begin(), primes.end(), p);
    require(it != primes.end() && *it == p, "HeckeFamily: prime not computed");
    return matrices[static_cast<std::size_t>(it - primes.begin())];
  }
};

/// T_p on the given subspace for each prime, computed on `workers` threads and merged by prime
/// order. The first `verified` primes get a full invariance check.
template <class F>
HeckeFamily<F> hecke_family(const ModularSymbolSpace<F>& space, const Subspace<F>& sub, std::vector<u64> primes,
                            unsigned workers = 1, std::size_t verified = 2) {
  std::sort(primes.begin(), primes.end());
  HeckeFamily<F> fam{primes, std::vector<Matrix<F>>(primes.size())};
  auto job = [&](std::size_t start, std::size_t step) {
    for (std::size_t i = start; i < primes.size(); i += step) {
      fam.matrices[i] = space.hecke_restricted(sub, primes[i], i < verified);
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(primes.size())));
  if (workers == 1) {
    job(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(job, w, workers);
    for (auto& t : pool) t.join();
  }
  return fam;
}

inline std::vector<u64> primes_up_to(u64 bound) {
  std::vector<u64> out;
  for (u64 p = 2; p <= bound; ++p) {
    if (is_prime(p)) out.push_back(p);
  }
  return out;
}

inline Matrix<GaloisField> extend_scalars(const Matrix<PrimeField>& m, const GaloisField& gf) {
  Matrix<GaloisField> r(gf, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = gf.from_prime(m(i, j));
  }
  return r;
}

inline Poly<GaloisField> extend_scalars(const Poly<PrimeField>& p, const GaloisField& gf) {
  Poly<GaloisField> r;
  for (u64 c : p) r.push_back(gf.from_prime(c));
  return r;
}

/// A primary component of the new subspace mod ell: the generalized eigenspace on which every
/// computed operator has a single irreducible characteristic factor.
struct PrimaryComponent {
  Subspace<PrimeField> space;  // in coordinates of the new subspace
  std::vector<Poly<PrimeField>> factors;  // per prime, irreducible
  std::vector<Matrix<PrimeField>> operators;  // per prime, restricted to `space`
};

/// Splits the whole space (dimension of the family's matrices) into primary components.
inline std::vector<PrimaryComponent> primary_components(const HeckeFamily<PrimeField>& fam, std::size_t dim,
                                                        const PrimeField& f) {
  if (dim == 0) return {};
  std::vector<PrimaryComponent> pieces{{Subspace<PrimeField>::whole(f, dim), {}, {}}};
  for (std::size_t pi = 0; pi < fam.primes.size(); ++pi) {
    std::vector<PrimaryComponent> next;
    for (auto& piece : pieces) {
      const auto a = piece.space.restrict(fam.matrices[pi]);
      const auto factors = poly::factor(f, charpoly(a));
      if (factors.size() == 1) {
        piece.factors.push_back(factors.front().factor);
        next.push_back(std::move(piece));
        continue;
      }
      for (const auto& fc : factors) {
        Poly<PrimeField> power = poly::constant(f, f.one());
        for (unsigned e = 0; e < fc.multiplicity; ++e) power = poly::mul(f, power, fc.factor);
        PrimaryComponent child{piece.space.kernel_of(evaluate(power, a)), piece.factors, {}};
        child.factors.push_back(fc.factor);
        next.push_back(std::move(child));
      }
    }
    pieces = std::move(next);
  }
  for (auto& piece : pieces) {
    for (const auto& m : fam.matrices) piece.operators.push_back(piece.space.restrict(m));
  }
  return pieces;
}

/// All systems of eigenvalues of {T_p, U_p : p <= bound, p != ell} on the new subspace over
/// an algebraic closure of F_ell. Non-semisimple components are reported in `issues`.
inline EigenDecomposition eigensystems_mod_ell(const ModularSymbolSpace<PrimeField>& space, u64 bound = 0,
                                               unsigned workers = 1) {
  const u64 N = space.level();
  const u64 ell = space.field().characteristic();
  const u64 sb = sturm_bound(N);
  if (bound == 0) bound = sb;
  require(bound >= sb, "eigensystems_mod_ell: bound must be at least the Sturm bound");
  const PrimeField& f = space.field();

  EigenDecomposition out;
  out.level = N;
  out.ell = ell;
  out.bound = bound;
  const auto& V = space.new_subspace();
  out.new_dimension = V.dim();
  out.expected_new_dimension = 2 * new_dimension(N);
  if (!out.dimension_matches()) {
    out.issues.push_back("new subspace mod " + std::to_string(ell) + " has dimension " + std::to_string(V.dim()) +
                         ", expected " + std::to_string(out.expected_new_dimension));
  }

  std::vector<u64> primes;
  for (u64 p : primes_up_to(bound)) {
    if (p != ell) primes.push_back(p);
  }
  const auto fam = hecke_family(space, V, primes, workers);
  const auto pieces = primary_components(fam, V.dim(), f);

  for (std::size_t idx = 0; idx < pieces.size(); ++idx) {
    const auto& piece = pieces[idx];
    Eigensystem es;
    es.id = idx;
    es.level = N;
    es.ell = ell;
    es.sturm = sb;
    es.primes = primes;
    es.minimal_polynomials = piece.factors;
    es.dimension = piece.space.dim();
    unsigned k = 1;
    for (const auto& g : piece.factors) k = std::lcm(k, static_cast<unsigned>(poly::degree<PrimeField>(g)));
    es.degree = k;
    es.multiplicity = es.dimension / k;

    std::string bad;
    for (std::size_t pi = 0; pi < primes.size(); ++pi) {
      if (!evaluate(piece.factors[pi], piece.operators[pi]).is_zero()) {
        es.semisimple = false;
        bad += (bad.empty() ? "" : ", ") + std::to_string(primes[pi]);
      }
    }
    if (!es.semisimple) {
      out.issues.push_back("component " + std::to_string(idx) + " (dimension " + std::to_string(es.dimension) +
                           "): not semisimple at p = " + bad);
    }

    // Walk down to one joint eigenspace over F_{ell^k}, choosing the least admissible root at each prime.
    const GaloisField gf(ell, k);
    auto K = Subspace<GaloisField>::whole(gf, es.dimension);
    for (std::size_t pi = 0; pi < primes.size(); ++pi) {
      const auto a = K.restrict(extend_scalars(piece.operators[pi], gf));
      auto roots = poly::roots(gf, extend_scalars(piece.factors[pi], gf));
      std::sort(roots.begin(), roots.end(), [&](const auto& x, const auto& y) { return gf.less(x, y); });
      bool found = false;
      for (const auto& alpha : roots) {
        auto shifted = a;
        for (std::size_t i = 0; i < shifted.rows(); ++i) shifted(i, i) = gf.sub(shifted(i, i), alpha);
        auto ker = K.kernel_of(shifted);
        if (ker.dim() == 0) continue;
        K = std::move(ker);
        es.eigenvalues.emplace_back(gf, alpha);
        found = true;
        break;
      }
      if (!found) fail(ErrorKind::decomposition, "eigensystems_mod_ell: no eigenvector for a factor root");
    }
    es.eigenspace_dim = K.dim();
    if (es.semisimple && es.eigenspace_dim != es.multiplicity) {
      es.semisimple = false;
      out.issues.push_back("component " + std::to_string(idx) + ": joint eigenspace has dimension " +
                           std::to_string(es.eigenspace_dim) + ", expected " + std::to_string(es.multiplicity));
    }
    out.systems.push_back(std::move(es));
  }
  return out;
}

inline EigenDecomposition eigensystems_mod_ell(u64 N, u64 ell, u64 bound = 0, unsigned workers = 1) {
  require(is_prime(ell), "eigensystems_mod_ell: ell must be prime");
  return eigensystems_mod_ell(build_space(N, PrimeField(ell)), bound, workers);
}

}  // namespace galimage::modsym
