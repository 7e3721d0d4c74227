#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "galimage/error.hpp"
#include "galimage/numth/poly.hpp"

namespace galimage {

/// Dense row-major matrix over a field policy. Vectors are rows; operators act on the right.
template <class F>
class Matrix {
 public:
  using value_type = typename F::value_type;
  using Vec = std::vector<value_type>;

  Matrix() = default;
  Matrix(F f, std::size_t rows, std::size_t cols)
      : f_(std::move(f)), rows_(rows), cols_(cols), data_(rows * cols, f_.zero()) {}

  static Matrix identity(const F& f, std::size_t n) {
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = f.one();
    return m;
  }
  static Matrix from_rows(const F& f, std::size_t cols, const std::vector<Vec>& rows) {
    Matrix m(f, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
    return m;
  }

  const F& field() const { return f_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  value_type& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const value_type& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec row(std::size_t i) const { return Vec(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }
  void set_row(std::size_t i, const Vec& v) {
    require(v.size() == cols_, "Matrix::set_row: length mismatch");
    std::copy(v.begin(), v.end(), data_.begin() + i * cols_);
  }
  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
  }

  Matrix transpose() const {
    Matrix t(f_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    }
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [&](const value_type& x) { return f_.is_zero(x); });
  }

  Matrix scaled(const value_type& c) const {
    Matrix r = *this;
    for (auto& x : r.data_) x = f_.mul(c, x);
    return r;
  }

  /// Rows of *this followed by rows of below.
  Matrix stack(const Matrix& below) const {
    require(cols_ == below.cols_, "Matrix::stack: column mismatch");
    Matrix r(f_, rows_ + below.rows_, cols_);
    std::copy(data_.begin(), data_.end(), r.data_.begin());
    std::copy(below.data_.begin(), below.data_.end(), r.data_.begin() + data_.size());
    return r;
  }

  /// Columns of *this followed by columns of right.
  Matrix augment(const Matrix& right) const {
    require(rows_ == right.rows_, "Matrix::augment: row mismatch");
    Matrix r(f_, rows_, cols_ + right.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
      for (std::size_t j = 0; j < right.cols_; ++j) r(i, cols_ + j) = right(i, j);
    }
    return r;
  }

  /// v * M for a row vector v.
  Vec apply(const Vec& v) const {
    require(v.size() == rows_, "Matrix::apply: length mismatch");
    Vec out(cols_, f_.zero());
    for (std::size_t i = 0; i < rows_; ++i) {
      if (f_.is_zero(v[i])) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        const auto& x = (*this)(i, j);
        if (!f_.is_zero(x)) out[j] = f_.add(out[j], f_.mul(v[i], x));
      }
    }
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    require(a.cols_ == b.rows_, "Matrix product: dimension mismatch");
    const F& f = a.f_;
    Matrix r(f, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const auto& x = a(i, k);
        if (f.is_zero(x)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const auto& y = b(k, j);
          if (!f.is_zero(y)) r(i, j) = f.add(r(i, j), f.mul(x, y));
        }
      }
    }
    return r;
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "Matrix sum: dimension mismatch");
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] = a.f_.add(a.data_[i], b.data_[i]);
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "Matrix difference: dimension mismatch");
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] = a.f_.sub(a.data_[i], b.data_[i]);
    return r;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t i = 0; i < a.data_.size(); ++i) {
      if (!a.f_.equal(a.data_[i], b.data_[i])) return false;
    }
    return true;
  }

 private:
  F f_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<value_type> data_;
};

/// In-place reduced row echelon form; returns pivot columns. Zero rows are dropped.
template <class F>
std::vector<std::size_t> rref(Matrix<F>& m) {
  const F& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && f.is_zero(m(p, c))) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(r, p);
    const auto inv = f.inv(m(r, c));
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = f.mul(m(r, j), inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || f.is_zero(m(i, c))) continue;
      const auto factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) {
        if (!f.is_zero(m(r, j))) m(i, j) = f.sub(m(i, j), f.mul(factor, m(r, j)));
      }
    }
    pivots.push_back(c);
    ++r;
  }
  Matrix<F> trimmed(f, r, m.cols());
  for (std::size_t i = 0; i < r; ++i) trimmed.set_row(i, m.row(i));
  m = std::move(trimmed);
  return pivots;
}

template <class F>
std::size_t rank(Matrix<F> m) {
  return rref(m).size();
}

/// Basis (as rows, in echelon form) of {x : M x^T = 0}.
template <class F>
Matrix<F> kernel(Matrix<F> m) {
  const F& f = m.field();
  const std::size_t n = m.cols();
  const auto pivots = rref(m);
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<typename Matrix<F>::Vec> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    typename Matrix<F>::Vec v(n, f.zero());
    v[free] = f.one();
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = f.neg(m(i, free));
    basis.push_back(std::move(v));
  }
  auto k = Matrix<F>::from_rows(f, n, basis);
  rref(k);
  return k;
}

/// Basis of {v : v M = 0}, rows in echelon form.
template <class F>
Matrix<F> left_kernel(const Matrix<F>& m) {
  return kernel(m.transpose());
}

/// Characteristic polynomial det(x - M) via reduction to Hessenberg form.
template <class F>
Poly<F> charpoly(const Matrix<F>& m) {
  require(m.square(), "charpoly: matrix must be square");
  const F& f = m.field();
  const std::size_t n = m.rows();
  Matrix<F> h = m;
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t r = j + 1;
    while (r < n && f.is_zero(h(r, j))) ++r;
    if (r == n) continue;
    if (r != j + 1) {
      h.swap_rows(r, j + 1);
      for (std::size_t i = 0; i < n; ++i) std::swap(h(i, r), h(i, j + 1));
    }
    const auto inv = f.inv(h(j + 1, j));
    for (std::size_t i = j + 2; i < n; ++i) {
      if (f.is_zero(h(i, j))) continue;
      const auto u = f.mul(h(i, j), inv);
      for (std::size_t k = 0; k < n; ++k) h(i, k) = f.sub(h(i, k), f.mul(u, h(j + 1, k)));
      for (std::size_t k = 0; k < n; ++k) h(k, j + 1) = f.add(h(k, j + 1), f.mul(u, h(k, i)));
    }
  }
  std::vector<Poly<F>> p;
  p.push_back(poly::constant(f, f.one()));
  for (std::size_t k = 0; k < n; ++k) {
    Poly<F> next = poly::mul(f, Poly<F>{f.neg(h(k, k)), f.one()}, p[k]);
    auto prod = f.one();
    for (std::size_t i = k; i-- > 0;) {
      prod = f.mul(prod, h(i + 1, i));
      const auto c = f.mul(h(i, k), prod);
      if (!f.is_zero(c)) next = poly::sub(f, next, poly::scale(f, p[i], c));
    }
    p.push_back(std::move(next));
  }
  return p[n];
}

/// q(M) by Horner's rule.
template <class F>
Matrix<F> evaluate(const Poly<F>& q, const Matrix<F>& m) {
  const F& f = m.field();
  Matrix<F> r(f, m.rows(), m.cols());
  for (std::size_t i = q.size(); i-- > 0;) {
    r = r * m;
    for (std::size_t j = 0; j < m.rows(); ++j) r(j, j) = f.add(r(j, j), q[i]);
  }
  return r;
}

/// Subspace of F^n given by an echelon basis (rows).
template <class F>
class Subspace {
 public:
  using Vec = typename Matrix<F>::Vec;

  Subspace() = default;
  explicit Subspace(Matrix<F> spanning) : basis_(std::move(spanning)) { pivots_ = rref(basis_); }

  static Subspace whole(const F& f, std::size_t n) { return Subspace(Matrix<F>::identity(f, n)); }

  std::size_t dim() const { return basis_.rows(); }
  std::size_t ambient_dim() const { return basis_.cols(); }
  const Matrix<F>& basis() const { return basis_; }
  const F& field() const { return basis_.field(); }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Coordinates w with w * basis = v; throws if v is outside the subspace.
  Vec coordinates(const Vec& v) const {
    const F& f = field();
    Vec w(dim(), f.zero());
    for (std::size_t i = 0; i < dim(); ++i) w[i] = v[pivots_[i]];
    const Vec back = basis_.apply(w);
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (!f.equal(back[j], v[j])) fail(ErrorKind::decomposition, "Subspace: vector is not in the subspace");
    }
    return w;
  }

  bool contains(const Vec& v) const {
    try {
      coordinates(v);
      return true;
    } catch (const Error&) {
      return false;
    }
  }

  /// Matrix of an ambient operator (acting on rows) restricted to this subspace.
  Matrix<F> restrict(const Matrix<F>& op) const {
    const Matrix<F> images = basis_ * op;
    Matrix<F> r(field(), dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i) r.set_row(i, coordinates(images.row(i)));
    return r;
  }

  /// Restriction from the pivot columns of an operator (ambient rows x dim columns), assuming
  /// the subspace is invariant; no membership check.
  Matrix<F> restrict_from_pivot_columns(const Matrix<F>& op_pivot_cols) const { return basis_ * op_pivot_cols; }

  /// Subspace spanned by coordinate rows (relative to this basis).
  Subspace from_coordinates(const Matrix<F>& coords) const {
    if (coords.rows() == 0) return Subspace(Matrix<F>(field(), 0, ambient_dim()));
    return Subspace(coords * basis_);
  }

  /// Kernel of an operator given in this subspace's coordinates.
  Subspace kernel_of(const Matrix<F>& restricted) const { return from_coordinates(left_kernel(restricted)); }

 private:
  Matrix<F> basis_;
  std::vector<std::size_t> pivots_;
};

}  // namespace galimage
