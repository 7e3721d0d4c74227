#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "galimage/linalg.hpp"
#include "galimage/modsym/cusps.hpp"
#include "galimage/modsym/genus.hpp"
#include "galimage/modsym/heilbronn.hpp"
#include "galimage/modsym/p1.hpp"

namespace galimage::modsym {

template <class F>
using SparseVec = std::vector<std::pair<std::uint32_t, typename F::value_type>>;

namespace detail {

/// x + a*y for sorted sparse vectors, dropping zeros.
template <class F>
SparseVec<F> sparse_axpy(const F& f, const SparseVec<F>& x, const typename F::value_type& a, const SparseVec<F>& y) {
  SparseVec<F> out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      out.emplace_back(y[j].first, f.mul(a, y[j].second));
      ++j;
    } else {
      auto v = f.add(x[i].second, f.mul(a, y[j].second));
      if (!f.is_zero(v)) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

template <class F>
const typename F::value_type* sparse_find(const SparseVec<F>& v, std::uint32_t col) {
  auto it = std::lower_bound(v.begin(), v.end(), col, [](const auto& e, std::uint32_t c) { return e.first < c; });
  return (it != v.end() && it->first == col) ? &it->second : nullptr;
}

/// Incremental sparse reduced echelon form. Every stored row has a unit pivot and no
/// entries in other pivot columns.
template <class F>
class SparseEchelon {
 public:
  explicit SparseEchelon(F f) : f_(std::move(f)) {}

  void insert(const SparseVec<F>& row) {
    std::map<std::uint32_t, typename F::value_type> acc;
    auto add = [&](std::uint32_t c, const typename F::value_type& v) {
      auto [it, fresh] = acc.emplace(c, v);
      if (!fresh) it->second = f_.add(it->second, v);
    };
    for (const auto& [c, v] : row) {
      auto it = rows_.find(c);
      if (it == rows_.end()) {
        add(c, v);
        continue;
      }
      for (const auto& [c2, v2] : it->second) {
        if (c2 != c) add(c2, f_.neg(f_.mul(v, v2)));
      }
    }
    SparseVec<F> r;
    for (auto& [c, v] : acc) {
      if (!f_.is_zero(v)) r.emplace_back(c, v);
    }
    if (r.empty()) return;
    const std::uint32_t pc = r.front().first;
    const auto inv = f_.inv(r.front().second);
    for (auto& e : r) e.second = f_.mul(e.second, inv);
    for (auto& [col, other] : rows_) {
      if (const auto* w = sparse_find<F>(other, pc)) other = sparse_axpy(f_, other, f_.neg(*w), r);
    }
    rows_.emplace(pc, std::move(r));
  }

  const std::map<std::uint32_t, SparseVec<F>>& rows() const { return rows_; }

 private:
  F f_;
  std::map<std::uint32_t, SparseVec<F>> rows_;
};

}  // namespace detail

/// Weight-2 Manin symbols for Gamma0(N): the span of P^1(Z/N) modulo
/// x + x sigma = 0 and x + x tau + x tau^2 = 0.
template <class F>
class ManinSymbols {
 public:
  using value_type = typename F::value_type;
  using Vec = std::vector<value_type>;

  ManinSymbols(u64 N, F f) : f_(std::move(f)), p1_(N) {
    const u64 ch = f_.characteristic();
    require(ch == 0 || ch > 3, "ManinSymbols: characteristic 2 and 3 are not supported");
    const std::size_t n = p1_.size();

    // 2-term relations: x_j = -x_i for j = i sigma, x_i = 0 when i is sigma-fixed.
    std::vector<std::int64_t> free_of(n, -1);
    std::vector<int> sign(n, 0);
    std::vector<bool> seen(n, false);
    std::size_t nfree = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (seen[i]) continue;
      const std::size_t j = p1_.apply_s(i);
      seen[i] = seen[j] = true;
      if (j == i) continue;
      free_of[i] = free_of[j] = static_cast<std::int64_t>(nfree++);
      sign[i] = 1;
      sign[j] = -1;
    }

    // 3-term relations in the free coordinates.
    detail::SparseEchelon<F> ech(f_);
    std::vector<bool> done(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const std::size_t j = p1_.apply_t(i), k = p1_.apply_t(j);
      done[i] = done[j] = done[k] = true;
      std::map<std::uint32_t, i64> rel;
      if (j == i) {
        // tau-fixed point: 3 x_i = 0
        if (sign[i] != 0) rel[static_cast<std::uint32_t>(free_of[i])] = 1;
      } else {
        for (std::size_t x : {i, j, k}) {
          if (sign[x] != 0) rel[static_cast<std::uint32_t>(free_of[x])] += sign[x];
        }
      }
      SparseVec<F> row;
      for (auto [c, v] : rel) {
        if (v != 0) row.emplace_back(c, f_.from_int(v));
      }
      if (!row.empty()) ech.insert(row);
    }

    const auto& pivots = ech.rows();
    std::vector<std::int64_t> pos(nfree, -1);
    std::vector<std::size_t> free_rep(nfree, 0);
    for (std::size_t i = n; i-- > 0;) {
      if (sign[i] == 1) free_rep[static_cast<std::size_t>(free_of[i])] = i;
    }
    for (std::size_t c = 0; c < nfree; ++c) {
      if (pivots.count(static_cast<std::uint32_t>(c))) continue;
      pos[c] = static_cast<std::int64_t>(basis_.size());
      basis_.push_back(free_rep[c]);
    }
    std::vector<SparseVec<F>> free_coords(nfree);
    for (std::size_t c = 0; c < nfree; ++c) {
      if (pos[c] >= 0) {
        free_coords[c] = {{static_cast<std::uint32_t>(pos[c]), f_.one()}};
        continue;
      }
      SparseVec<F> v;
      for (const auto& [g, val] : pivots.at(static_cast<std::uint32_t>(c))) {
        if (g != c) v.emplace_back(static_cast<std::uint32_t>(pos[g]), f_.neg(val));
      }
      std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      free_coords[c] = std::move(v);
    }
    coords_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (sign[i] == 0) continue;
      coords_[i] = free_coords[static_cast<std::size_t>(free_of[i])];
      if (sign[i] < 0) {
        for (auto& e : coords_[i]) e.second = f_.neg(e.second);
      }
    }
  }

  u64 level() const { return p1_.level(); }
  const F& field() const { return f_; }
  const P1List& p1() const { return p1_; }
  std::size_t dimension() const { return basis_.size(); }
  /// P^1 indices of the Manin symbols forming the basis.
  const std::vector<std::size_t>& basis_indices() const { return basis_; }
  /// Sparse coordinates of the Manin symbol with the given P^1 index.
  const SparseVec<F>& coordinates(std::size_t p1_index) const { return coords_[p1_index]; }

  Vec zero() const { return Vec(dimension(), f_.zero()); }

  void accumulate(Vec& acc, std::size_t p1_index, const value_type& coef) const {
    for (const auto& [j, v] : coords_[p1_index]) acc[j] = f_.add(acc[j], f_.mul(coef, v));
  }

  /// The Manin symbol (c : d) as a dense vector.
  Vec manin_symbol(i64 c, i64 d) const {
    const auto idx = p1_.index(c, d);
    require(idx != P1List::npos, "manin_symbol: gcd(c, d, N) != 1");
    Vec v = zero();
    accumulate(v, idx, f_.one());
    return v;
  }

  /// {0, x} via continued fractions.
  Vec zero_to(const Cusp& x) const {
    Vec v = zero();
    if (x.is_infinity()) {
      accumulate(v, p1_.index(0, 1), f_.one());
      return v;
    }
    const auto cf = convergents(x.num, x.den);
    for (std::size_t j = 1; j < cf.size(); ++j) {
      const i64 k = static_cast<i64>(j) - 2;
      const i64 s = (k % 2 != 0) ? 1 : -1;
      accumulate(v, p1_.index(s * cf[j].second, cf[j - 1].second), f_.one());
    }
    return v;
  }

  /// The modular symbol {x, y}.
  Vec modular_symbol(const Cusp& x, const Cusp& y) const {
    Vec a = zero_to(y);
    const Vec b = zero_to(x);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = f_.sub(a[i], b[i]);
    return a;
  }

  /// SL2(Z) lift [a b; c d] of the i-th basis symbol; the symbol is {b/d, a/c}.
  Mat2 basis_lift(std::size_t i) const {
    const auto [c, d] = p1_[basis_[i]];
    return lift_to_sl2z(c, d, level());
  }

  /// T_p (U_p when p | N) on the whole quotient: row i is the image of basis symbol i.
  Matrix<F> hecke_matrix(u64 p, HeilbronnKind kind = HeilbronnKind::cremona) const {
    require(is_prime(p), "hecke_matrix: p must be prime");
    const auto hs = heilbronn(p, kind);
    Matrix<F> m(f_, dimension(), dimension());
    for (std::size_t i = 0; i < dimension(); ++i) {
      const auto [c0, d0] = p1_[basis_[i]];
      const i64 c = static_cast<i64>(c0), d = static_cast<i64>(d0);
      Vec row = zero();
      for (const auto& h : hs) {
        const auto idx = p1_.index(c * h.a + d * h.c, c * h.b + d * h.d);
        if (idx != P1List::npos) accumulate(row, idx, f_.one());
      }
      m.set_row(i, row);
    }
    return m;
  }

  /// Selected columns of hecke_matrix(p, kind), skipping work on the other coordinates.
  Matrix<F> hecke_columns(u64 p, const std::vector<std::size_t>& cols,
                          HeilbronnKind kind = HeilbronnKind::cremona) const {
    require(is_prime(p), "hecke_columns: p must be prime");
    std::vector<std::int64_t> where(dimension(), -1);
    for (std::size_t k = 0; k < cols.size(); ++k) where[cols[k]] = static_cast<std::int64_t>(k);
    std::vector<SparseVec<F>> projected(coords_.size());
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      for (const auto& [j, v] : coords_[i]) {
        if (where[j] >= 0) projected[i].emplace_back(static_cast<std::uint32_t>(where[j]), v);
      }
    }
    const auto hs = heilbronn(p, kind);
    std::vector<std::uint32_t> hits(p1_.size(), 0);
    std::vector<std::size_t> touched;
    Matrix<F> m(f_, dimension(), cols.size());
    for (std::size_t i = 0; i < dimension(); ++i) {
      const auto [c0, d0] = p1_[basis_[i]];
      const i64 c = static_cast<i64>(c0), d = static_cast<i64>(d0);
      for (const auto& h : hs) {
        const auto idx = p1_.index(c * h.a + d * h.c, c * h.b + d * h.d);
        if (idx == P1List::npos || projected[idx].empty()) continue;
        if (hits[idx]++ == 0) touched.push_back(idx);
      }
      for (std::size_t idx : touched) {
        const auto n = f_.from_int(static_cast<i64>(hits[idx]));
        for (const auto& [j, v] : projected[idx]) m(i, j) = f_.add(m(i, j), f_.mul(n, v));
        hits[idx] = 0;
      }
      touched.clear();
    }
    return m;
  }

  /// Degeneracy map {x, y} -> {t x, t y} into the symbols of a lower level M with t M | N.
  Matrix<F> degeneracy_matrix(const ManinSymbols& lower, u64 t) const {
    require(level() % (t * lower.level()) == 0, "degeneracy_matrix: t * M must divide N");
    const i64 ti = static_cast<i64>(t);
    Matrix<F> m(f_, dimension(), lower.dimension());
    for (std::size_t i = 0; i < dimension(); ++i) {
      const Mat2 g = basis_lift(i);
      m.set_row(i, lower.modular_symbol(Cusp::make(ti * g.b, g.d), Cusp::make(ti * g.a, g.c)));
    }
    return m;
  }

  /// Boundary map to the free space on Gamma0(N)-classes of cusps; fills `cusps`.
  Matrix<F> boundary_matrix(CuspList& cusps) const {
    std::vector<std::pair<std::size_t, std::size_t>> ends;  // (to, from)
    for (std::size_t i = 0; i < dimension(); ++i) {
      const Mat2 g = basis_lift(i);
      const auto to = cusps.index(Cusp::make(g.a, g.c));
      const auto from = cusps.index(Cusp::make(g.b, g.d));
      ends.emplace_back(to, from);
    }
    Matrix<F> m(f_, dimension(), cusps.size());
    for (std::size_t i = 0; i < dimension(); ++i) {
      const auto [to, from] = ends[i];
      m(i, to) = f_.add(m(i, to), f_.one());
      m(i, from) = f_.sub(m(i, from), f_.one());
    }
    return m;
  }

 private:
  F f_;
  P1List p1_;
  std::vector<std::size_t> basis_;
  std::vector<SparseVec<F>> coords_;
};

struct SpaceOptions {
  bool compute_new = true;
};

/// Modular symbols of weight 2 for Gamma0(N) with boundary, cuspidal and new subspaces.
template <class F>
class ModularSymbolSpace {
 public:
  using Vec = typename Matrix<F>::Vec;

  ModularSymbolSpace(u64 N, F f, SpaceOptions opts = {}) : ambient_(N, f), cusp_list_(N) {
    cusp_list_.index(Cusp::infinity());
    boundary_ = ambient_.boundary_matrix(cusp_list_);
    cuspidal_ = Subspace<F>(left_kernel(boundary_));
    if (!opts.compute_new) return;
    Matrix<F> joint = boundary_;
    for (auto [q, e] : factor_u64(N)) {
      const ManinSymbols<F> lower(N / q, f);
      for (u64 t : {u64{1}, q}) joint = joint.augment(ambient_.degeneracy_matrix(lower, t));
    }
    new_ = Subspace<F>(left_kernel(joint));
    has_new_ = true;
  }

  u64 level() const { return ambient_.level(); }
  const F& field() const { return ambient_.field(); }
  const ManinSymbols<F>& ambient() const { return ambient_; }
  std::size_t dimension() const { return ambient_.dimension(); }
  const std::vector<Cusp>& cusps() const { return cusp_list_.representatives(); }
  const Matrix<F>& boundary_matrix() const { return boundary_; }
  const Subspace<F>& cuspidal() const { return cuspidal_; }
  bool has_new() const { return has_new_; }
  const Subspace<F>& new_subspace() const {
    require(has_new_, "new_subspace: space was built without the new subspace");
    return new_;
  }

  Matrix<F> hecke_matrix(u64 p, HeilbronnKind kind = HeilbronnKind::cremona) const {
    return ambient_.hecke_matrix(p, kind);
  }
  /// T_p (U_p for p | N) on the cuspidal subspace, in its echelon basis.
  Matrix<F> hecke_operator(u64 p, HeilbronnKind kind = HeilbronnKind::cremona) const {
    return cuspidal_.restrict(hecke_matrix(p, kind));
  }
  /// T_p restricted to an invariant subspace `sub` of the ambient space. With verify set the
  /// full image is computed and checked to lie in `sub`.
  Matrix<F> hecke_restricted(const Subspace<F>& sub, u64 p, bool verify = true,
                             HeilbronnKind kind = HeilbronnKind::cremona) const {
    if (verify) return sub.restrict(hecke_matrix(p, kind));
    return sub.restrict_from_pivot_columns(ambient_.hecke_columns(p, sub.pivots(), kind));
  }
  Matrix<F> hecke_on_new(u64 p, HeilbronnKind kind = HeilbronnKind::cremona) const {
    return new_subspace().restrict(hecke_matrix(p, kind));
  }

 private:
  ManinSymbols<F> ambient_;
  CuspList cusp_list_;
  Matrix<F> boundary_;
  Subspace<F> cuspidal_;
  Subspace<F> new_;
  bool has_new_ = false;
};

/// Builds the space; over F_ell requires ell not dividing 6N.
template <class F>
ModularSymbolSpace<F> build_space(u64 N, F f, SpaceOptions opts = {}) {
  require(N >= 1, "build_space: N must be positive");
  const u64 ch = f.characteristic();
  if (ch != 0 && (6 * N) % ch == 0) {
    fail(ErrorKind::invalid_input,
         "build_space: coefficient characteristic " + std::to_string(ch) + " divides 6N = " + std::to_string(6 * N));
  }
  return ModularSymbolSpace<F>(N, std::move(f), opts);
}

}  // namespace galimage::modsym
