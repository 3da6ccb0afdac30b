#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rasl {

// Dense matrix over the prime field Z/p, digit representation.  Dimensions at
// play are small (a few hundred), so plain Gaussian elimination is plenty.
class PrimeMatrix {
 public:
  PrimeMatrix(std::size_t rows, std::size_t cols, std::uint64_t p)
      : rows_(rows), cols_(cols), p_(p), a_(rows * cols, 0) {}

  std::uint64_t& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  std::uint64_t at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint64_t modulus() const { return p_; }

  static std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
    // extended Euclid; p prime
    std::int64_t t = 0, nt = 1, r = (std::int64_t)p, nr = (std::int64_t)(a % p);
    while (nr != 0) {
      std::int64_t q = r / nr;
      std::int64_t tmp = t - q * nt; t = nt; nt = tmp;
      tmp = r - q * nr; r = nr; nr = tmp;
    }
    if (r != 1) throw std::domain_error("inv_mod: not invertible");
    if (t < 0) t += (std::int64_t)p;
    return (std::uint64_t)t;
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
  }
  void scale_row(std::size_t i, std::uint64_t f) {
    for (std::size_t c = 0; c < cols_; ++c)
      at(i, c) = (std::uint64_t)((unsigned __int128)at(i, c) * f % p_);
  }
  void add_scaled_row(std::size_t dst, std::size_t src, std::uint64_t f) {
    for (std::size_t c = 0; c < cols_; ++c)
      at(dst, c) = (std::uint64_t)((at(dst, c) + (unsigned __int128)at(src, c) * f) % p_);
  }

 private:
  std::size_t rows_, cols_;
  std::uint64_t p_;
  std::vector<std::uint64_t> a_;
};

// Row-reduces [A | I] once; solve() then answers A x = b queries and detects
// right-hand sides outside the column span.
class PrimeSolver {
 public:
  PrimeSolver() : transform_(0, 0, 2) {}

  explicit PrimeSolver(const PrimeMatrix& m) : PrimeSolver(m, m.modulus()) {}

  PrimeSolver(const PrimeMatrix& m, std::uint64_t p)
      : transform_(m.rows(), m.rows(), p), p_(p), out_dim_(m.cols()) {
    PrimeMatrix A = m;
    const std::size_t rows = m.rows(), cols = m.cols();
    for (std::size_t i = 0; i < rows; ++i) transform_.at(i, i) = 1;
    pivot_row_of_col_.assign(cols, -1);
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
      std::size_t piv = row;
      while (piv < rows && A.at(piv, col) == 0) ++piv;
      if (piv == rows) continue;
      A.swap_rows(row, piv);
      transform_.swap_rows(row, piv);
      std::uint64_t inv = PrimeMatrix::inv_mod(A.at(row, col), p_);
      A.scale_row(row, inv);
      transform_.scale_row(row, inv);
      for (std::size_t r = 0; r < rows; ++r) {
        if (r == row) continue;
        std::uint64_t f = A.at(r, col);
        if (f == 0) continue;
        A.add_scaled_row(r, row, p_ - f);
        transform_.add_scaled_row(r, row, p_ - f);
      }
      pivot_row_of_col_[col] = (std::ptrdiff_t)row;
      ++row;
    }
    rank_ = row;
  }

  std::size_t rank() const { return rank_; }

  std::optional<std::vector<std::uint64_t>> solve(const std::vector<std::uint64_t>& b) const {
    std::vector<std::uint64_t> y(transform_.rows(), 0);
    for (std::size_t r = 0; r < transform_.rows(); ++r) {
      unsigned __int128 acc = 0;
      for (std::size_t c = 0; c < transform_.cols(); ++c)
        acc += (unsigned __int128)transform_.at(r, c) * (b[c] % p_);
      y[r] = (std::uint64_t)(acc % p_);
    }
    std::vector<std::uint64_t> x(out_dim_, 0);
    std::vector<bool> consumed(transform_.rows(), false);
    for (std::size_t c = 0; c < out_dim_; ++c) {
      if (pivot_row_of_col_[c] >= 0) {
        x[c] = y[(std::size_t)pivot_row_of_col_[c]];
        consumed[(std::size_t)pivot_row_of_col_[c]] = true;
      }
    }
    for (std::size_t r = 0; r < y.size(); ++r)
      if (!consumed[r] && y[r] != 0) return std::nullopt;
    return x;
  }

 private:
  PrimeMatrix transform_;
  std::uint64_t p_ = 2;
  std::size_t out_dim_ = 0;
  std::vector<std::ptrdiff_t> pivot_row_of_col_;
  std::size_t rank_ = 0;
};

// Gaussian elimination templated over any field-like type F exposing
//   using Elt; add/sub/mul/inv/is_zero/zero/one.
// Returns the inverse matrix, or nullopt when singular.
template <class F>
std::optional<std::vector<std::vector<typename F::Elt>>> invert_matrix(
    const F& f, std::vector<std::vector<typename F::Elt>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<typename F::Elt>> inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    inv[i].assign(n, f.zero());
    inv[i][i] = f.one();
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && f.is_zero(a[piv][col])) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[col], a[piv]);
    std::swap(inv[col], inv[piv]);
    auto scale = f.inv(a[col][col]);
    for (std::size_t c = 0; c < n; ++c) {
      a[col][c] = f.mul(a[col][c], scale);
      inv[col][c] = f.mul(inv[col][c], scale);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || f.is_zero(a[r][col])) continue;
      auto factor = a[r][col];
      for (std::size_t c = 0; c < n; ++c) {
        a[r][c] = f.sub(a[r][c], f.mul(factor, a[col][c]));
        inv[r][c] = f.sub(inv[r][c], f.mul(factor, inv[col][c]));
      }
    }
  }
  return inv;
}

// Left kernel vector of a square matrix (rows as vectors), or nullopt when the
// rows are independent.  Used to phrase "these inputs are dependent" errors.
template <class F>
std::optional<std::vector<typename F::Elt>> left_kernel_vector(
    const F& f, const std::vector<std::vector<typename F::Elt>>& rows) {
  const std::size_t n = rows.size();
  if (n == 0) return std::nullopt;
  const std::size_t m = rows[0].size();
  // Eliminate [rows | I]; a zero row in the left block exposes the combination.
  std::vector<std::vector<typename F::Elt>> a = rows;
  std::vector<std::vector<typename F::Elt>> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i].assign(n, f.zero());
    t[i][i] = f.one();
  }
  std::size_t row = 0;
  for (std::size_t col = 0; col < m && row < n; ++col) {
    std::size_t piv = row;
    while (piv < n && f.is_zero(a[piv][col])) ++piv;
    if (piv == n) continue;
    std::swap(a[row], a[piv]);
    std::swap(t[row], t[piv]);
    auto scale = f.inv(a[row][col]);
    for (std::size_t c = 0; c < m; ++c) a[row][c] = f.mul(a[row][c], scale);
    for (std::size_t c = 0; c < n; ++c) t[row][c] = f.mul(t[row][c], scale);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row || f.is_zero(a[r][col])) continue;
      auto factor = a[r][col];
      for (std::size_t c = 0; c < m; ++c) a[r][c] = f.sub(a[r][c], f.mul(factor, a[row][c]));
      for (std::size_t c = 0; c < n; ++c) t[r][c] = f.sub(t[r][c], f.mul(factor, t[row][c]));
    }
    ++row;
  }
  for (std::size_t r = row; r < n; ++r) {
    bool zero = true;
    for (std::size_t c = 0; c < m && zero; ++c) zero = f.is_zero(a[r][c]);
    if (zero) return t[r];
  }
  return std::nullopt;
}

}  // namespace rasl
