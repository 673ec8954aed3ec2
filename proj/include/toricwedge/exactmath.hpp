#pragma once

/**
 * Exact rational linear algebra: the `Rational` scalar, a small dense
 * row-major `QMatrix`, reduced row echelon form, kernels, and integer
 * determinants by fraction-free elimination.
 */

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "toricwedge/error.hpp"

namespace toricwedge {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;
using QVector = std::vector<Rational>;
using IntVector = std::vector<std::int64_t>;

inline bool is_zero(const Rational& q) { return q.sign() == 0; }

inline std::string to_string(const Rational& q) { return q.str(); }

inline Rational parse_rational(const std::string& text) {
  const auto fail = [&] { return Error(ErrorKind::Parse, "not a rational: '" + text + "'"); };
  const auto slash = text.find('/');
  const auto integer = [&](const std::string& part) {
    std::size_t k = !part.empty() && (part[0] == '-' || part[0] == '+');
    if (k == part.size() || part.find_first_not_of("0123456789", k) != std::string::npos) throw fail();
    return BigInt(part[0] == '+' ? part.substr(1) : part);
  };
  const BigInt num = integer(text.substr(0, slash));
  const BigInt den = slash == std::string::npos ? BigInt(1) : integer(text.substr(slash + 1));
  if (den == 0) throw fail();
  return Rational(num, den);
}

inline Rational dot(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "dot product of unequal lengths");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!is_zero(a[i]) && !is_zero(b[i])) s += a[i] * b[i];
  }
  return s;
}

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static QMatrix from_rows(const std::vector<QVector>& rows) {
    QMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != m.cols_) throw Error(ErrorKind::DimensionMismatch, "ragged matrix rows");
      std::copy(rows[r].begin(), rows[r].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(r * m.cols_));
    }
    return m;
  }

  template <typename Int>
  static QMatrix from_int_rows(const std::vector<std::vector<Int>>& rows) {
    std::vector<QVector> q;
    q.reserve(rows.size());
    for (const auto& row : rows) {
      QVector v;
      v.reserve(row.size());
      for (auto x : row) v.emplace_back(static_cast<long long>(x));
      q.push_back(std::move(v));
    }
    return from_rows(q);
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  QVector row(std::size_t r) const {
    return QVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
  }
  QVector col(std::size_t c) const {
    QVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  QMatrix transpose() const {
    QMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  bool is_zero_matrix() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return is_zero(q); });
  }

  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

inline QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "matrix product shapes");
  QMatrix p(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (is_zero(a(i, k))) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!is_zero(b(k, j))) p(i, j) += a(i, k) * b(k, j);
    }
  return p;
}

inline QVector operator*(const QMatrix& a, const QVector& x) {
  if (a.cols() != x.size()) throw Error(ErrorKind::DimensionMismatch, "matrix-vector shapes");
  QVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (!is_zero(a(i, k)) && !is_zero(x[k])) y[i] += a(i, k) * x[k];
  return y;
}

/// Reduced row echelon form, pivots chosen left to right.
struct RowEchelon {
  QMatrix reduced;
  std::vector<std::size_t> pivot_cols;  ///< pivot column of row r, for r < rank
  std::size_t rank() const noexcept { return pivot_cols.size(); }
};

inline RowEchelon row_echelon(QMatrix m) {
  RowEchelon out;
  std::size_t lead_row = 0;
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::size_t> nz;
  for (std::size_t c = 0; c < cols && lead_row < rows; ++c) {
    std::size_t p = lead_row;
    while (p < rows && is_zero(m(p, c))) ++p;
    if (p == rows) continue;
    if (p != lead_row)
      for (std::size_t k = 0; k < cols; ++k) std::swap(m(p, k), m(lead_row, k));
    nz.clear();
    for (std::size_t k = c; k < cols; ++k)
      if (!is_zero(m(lead_row, k))) nz.push_back(k);
    const Rational inv = 1 / m(lead_row, c);
    for (auto k : nz) m(lead_row, k) *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == lead_row || is_zero(m(r, c))) continue;
      const Rational f = m(r, c);
      for (auto k : nz) m(r, k) -= f * m(lead_row, k);
    }
    out.pivot_cols.push_back(c);
    ++lead_row;
  }
  out.reduced = std::move(m);
  return out;
}

inline std::size_t rank(const QMatrix& m) { return row_echelon(m).rank(); }

/// Scales a rational vector to a primitive integer vector with the same direction.
inline QVector primitive_direction(QVector v) {
  BigInt den = 1, g = 0;
  for (const auto& q : v) den = boost::multiprecision::lcm(den, BigInt(denominator(q)));
  for (auto& q : v) {
    q *= den;
    g = boost::multiprecision::gcd(g, BigInt(numerator(q)));
  }
  if (g > 1)
    for (auto& q : v) q /= Rational(g);
  return v;
}

/**
 * Basis of the right kernel of `m` as the columns of the returned
 * cols(m) x (cols(m) - rank(m)) matrix. One column per free variable of the
 * reduced echelon form, in increasing order, each scaled to a primitive
 * integer vector.
 */
inline QMatrix kernel_basis(const QMatrix& m) {
  const auto ech = row_echelon(m);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto c : ech.pivot_cols) is_pivot[c] = true;
  std::vector<QVector> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    QVector v(n);
    v[f] = 1;
    for (std::size_t r = 0; r < ech.rank(); ++r) v[ech.pivot_cols[r]] = -ech.reduced(r, f);
    basis.push_back(primitive_direction(std::move(v)));
  }
  QMatrix k(n, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) k(i, j) = basis[j][i];
  return k;
}

/**
 * Kernel basis whose last column is the all-ones vector. Requires the row
 * sums of `m` to vanish. The remaining columns are taken greedily from
 * `kernel_basis(m)`, skipping any that are dependent on the ones column and
 * the columns already chosen.
 */
inline QMatrix kernel_with_ones(const QMatrix& m) {
  const std::size_t n = m.cols();
  const QVector ones(n, Rational(1));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Rational s = 0;
    for (std::size_t c = 0; c < n; ++c) s += m(r, c);
    if (!is_zero(s))
      throw Error(ErrorKind::PreconditionViolated, "all-ones vector is not in the kernel (row " +
                                                       std::to_string(r + 1) + " sums to " + to_string(s) + ")");
  }
  const QMatrix k = kernel_basis(m);
  std::vector<QVector> chosen;
  std::vector<QVector> span{ones};
  for (std::size_t j = 0; j < k.cols(); ++j) {
    auto trial = span;
    trial.push_back(k.col(j));
    if (rank(QMatrix::from_rows(trial)) == trial.size()) {
      span = std::move(trial);
      chosen.push_back(k.col(j));
    }
  }
  QMatrix b(n, chosen.size() + 1);
  for (std::size_t j = 0; j < chosen.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) b(i, j) = chosen[j][i];
  for (std::size_t i = 0; i < n; ++i) b(i, chosen.size()) = 1;
  return b;
}

namespace detail {

inline std::int64_t checked_narrow(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw Error(ErrorKind::PreconditionViolated, "integer overflow in determinant");
  return static_cast<std::int64_t>(v);
}

}  // namespace detail

/// Determinant of a square integer matrix (Bareiss fraction-free elimination).
inline std::int64_t integer_det(std::vector<IntVector> a) {
  const std::size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw Error(ErrorKind::NotSquare, "integer_det needs a square matrix");
  if (n == 0) return 1;
  int sign = 1;
  std::int64_t prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        const __int128 num = static_cast<__int128>(a[i][j]) * a[k][k] - static_cast<__int128>(a[i][k]) * a[k][j];
        a[i][j] = detail::checked_narrow(num / prev);
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace toricwedge
