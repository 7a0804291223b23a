#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "curvid/errors.hpp"
#include "curvid/rational.hpp"

namespace curvid {

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

namespace detail {

inline std::vector<Integer> integer_row(const RationalVector& row) {
  Integer l = 1;
  for (const auto& x : row)
    if (sgn(x) != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
  std::vector<Integer> out;
  out.reserve(row.size());
  for (const auto& x : row) out.push_back(x.get_num() * (l / x.get_den()));
  return out;
}

inline void remove_content(std::vector<Integer>& row) {
  Integer g = 0;
  for (const auto& x : row) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g > 1)
    for (auto& x : row) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

inline std::optional<std::size_t> leading(const std::vector<Integer>& row) {
  for (std::size_t i = 0; i < row.size(); ++i)
    if (row[i] != 0) return i;
  return std::nullopt;
}

// target <- target * pivot_row[col] - pivot_row * target[col], then divide out
// the content. Clears target[col] without leaving the integers.
inline void eliminate(std::vector<Integer>& target, const std::vector<Integer>& pivot_row, std::size_t col) {
  if (target[col] == 0) return;
  const Integer a = pivot_row[col];
  const Integer b = target[col];
  for (std::size_t i = 0; i < target.size(); ++i) target[i] = target[i] * a - pivot_row[i] * b;
  remove_content(target);
}

}  // namespace detail

/// Incrementally maintained integer row echelon form of a rational matrix.
///
/// Rows are scaled to primitive integer vectors and eliminated fraction-free,
/// so the row space (and hence the nullspace) is computed exactly.
class RowEchelon {
 public:
  explicit RowEchelon(std::size_t cols) : cols_(cols) {}

  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Adds a row; returns true if it increased the rank.
  bool add(const RationalVector& row) {
    if (row.size() != cols_) throw DomainError("row length does not match column count");
    auto r = detail::integer_row(row);
    detail::remove_content(r);
    for (std::size_t q = 0; q < rows_.size(); ++q) detail::eliminate(r, rows_[q], pivots_[q]);
    auto lead = detail::leading(r);
    if (!lead) return false;
    // Keep rows sorted by pivot column.
    auto it = std::lower_bound(pivots_.begin(), pivots_.end(), *lead);
    const auto at = static_cast<std::size_t>(it - pivots_.begin());
    pivots_.insert(it, *lead);
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(at), std::move(r));
    return true;
  }

  /// Reduced row echelon form over the rationals (pivot entries 1).
  RationalMatrix reduced() const {
    auto rows = rows_;
    for (std::size_t q = rows.size(); q-- > 0;)
      for (std::size_t p = 0; p < q; ++p) detail::eliminate(rows[p], rows[q], pivots_[q]);
    RationalMatrix out;
    for (std::size_t q = 0; q < rows.size(); ++q) {
      RationalVector v(cols_);
      const Integer& piv = rows[q][pivots_[q]];
      for (std::size_t i = 0; i < cols_; ++i) {
        v[i] = Rational(rows[q][i], piv);
        v[i].canonicalize();
      }
      out.push_back(std::move(v));
    }
    return out;
  }

  /// Basis of {x : A x = 0}, one vector per non-pivot column, itself in
  /// reduced echelon form (each vector has a 1 at its free column and zeros
  /// at the other free columns).
  RationalMatrix nullspace() const {
    const auto rref = reduced();
    std::vector<bool> is_pivot(cols_, false);
    for (auto p : pivots_) is_pivot[p] = true;
    RationalMatrix basis;
    for (std::size_t f = 0; f < cols_; ++f) {
      if (is_pivot[f]) continue;
      RationalVector v(cols_);
      v[f] = 1;
      for (std::size_t q = 0; q < rref.size(); ++q) v[pivots_[q]] = -rref[q][f];
      basis.push_back(std::move(v));
    }
    return canonical_basis(basis);
  }

  /// Reduced echelon form of a list of vectors (rows), zero rows dropped.
  static RationalMatrix canonical_basis(const RationalMatrix& vectors) {
    if (vectors.empty()) return {};
    RowEchelon e(vectors.front().size());
    for (const auto& v : vectors) e.add(v);
    return e.reduced();
  }

 private:
  std::size_t cols_;
  std::vector<std::vector<Integer>> rows_;
  std::vector<std::size_t> pivots_;
};

inline std::size_t rank(const RationalMatrix& a) {
  if (a.empty()) return 0;
  RowEchelon e(a.front().size());
  for (const auto& r : a) e.add(r);
  return e.rank();
}

inline RationalMatrix nullspace(const RationalMatrix& a, std::size_t cols) {
  RowEchelon e(cols);
  for (const auto& r : a) e.add(r);
  return e.nullspace();
}

/// Exact determinant by Gaussian elimination over the rationals.
inline Rational determinant(RationalMatrix a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a[p][c]) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (sgn(a[r][c]) == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

}  // namespace curvid
