#ifndef GRW_LINALG_HPP
#define GRW_LINALG_HPP

#include <stdexcept>
#include <vector>

#include "grw/rational.hpp"

namespace grw {

/// Dense exact matrix over a field K (row-major).
template <class K>
using Mat = std::vector<std::vector<K>>;

/// Row echelon reduction in place; returns (rank, determinant sign-tracked
/// product of pivots if square, else K{}).  Full reduction (RREF).
template <class K>
int rref(Mat<K>& m) {
  if (m.empty()) return 0;
  size_t rows = m.size(), cols = m[0].size();
  int rank = 0;
  for (size_t col = 0; col < cols && static_cast<size_t>(rank) < rows; ++col) {
    size_t piv = rows;
    for (size_t rr = static_cast<size_t>(rank); rr < rows; ++rr)
      if (!is_zero(m[rr][col])) {
        piv = rr;
        break;
      }
    if (piv == rows) continue;
    std::swap(m[static_cast<size_t>(rank)], m[piv]);
    K lead_inv = inv(m[static_cast<size_t>(rank)][col]);
    for (size_t cc = col; cc < cols; ++cc)
      m[static_cast<size_t>(rank)][cc] = m[static_cast<size_t>(rank)][cc] * lead_inv;
    for (size_t rr = 0; rr < rows; ++rr) {
      if (rr == static_cast<size_t>(rank) || is_zero(m[rr][col])) continue;
      K f = m[rr][col];
      for (size_t cc = col; cc < cols; ++cc) m[rr][cc] = m[rr][cc] - f * m[static_cast<size_t>(rank)][cc];
    }
    ++rank;
  }
  return rank;
}

template <class K>
int rank_of(Mat<K> m) {
  return rref(m);
}

/// Determinant by fraction-free-ish Gaussian elimination with division (K is
/// a field).  Throws on non-square input.
template <class K>
K det(Mat<K> m) {
  size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("determinant of non-square matrix");
  K d = K(Rat(1));
  for (size_t col = 0; col < n; ++col) {
    size_t piv = n;
    for (size_t rr = col; rr < n; ++rr)
      if (!is_zero(m[rr][col])) {
        piv = rr;
        break;
      }
    if (piv == n) return K{};
    if (piv != col) {
      std::swap(m[col], m[piv]);
      d = -d;
    }
    d = d * m[col][col];
    K lead_inv = inv(m[col][col]);
    for (size_t rr = col + 1; rr < n; ++rr) {
      if (is_zero(m[rr][col])) continue;
      K f = m[rr][col] * lead_inv;
      for (size_t cc = col; cc < n; ++cc) m[rr][cc] = m[rr][cc] - f * m[col][cc];
    }
  }
  return d;
}

/// Basis of the right null space of m (solutions of m x = 0), as rows.
template <class K>
Mat<K> nullspace(Mat<K> m) {
  if (m.empty()) return {};
  size_t cols = m[0].size();
  rref(m);
  std::vector<long> pivot_of_col(cols, -1);
  size_t row = 0;
  for (size_t col = 0; col < cols && row < m.size(); ++col) {
    if (!is_zero(m[row][col])) {
      pivot_of_col[col] = static_cast<long>(row);
      ++row;
    }
  }
  Mat<K> basis;
  for (size_t freec = 0; freec < cols; ++freec) {
    if (pivot_of_col[freec] >= 0) continue;
    std::vector<K> v(cols, K{});
    v[freec] = K(Rat(1));
    for (size_t col = 0; col < cols; ++col) {
      long pr = pivot_of_col[col];
      if (pr >= 0) v[col] = -m[static_cast<size_t>(pr)][freec];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Solve m x = b if consistent; returns false if inconsistent.  x gets one
/// particular solution (free variables set to zero).
template <class K>
bool solve(Mat<K> m, std::vector<K> b, std::vector<K>& x) {
  size_t rows = m.size(), cols = m.empty() ? 0 : m[0].size();
  for (size_t rr = 0; rr < rows; ++rr) m[rr].push_back(b[rr]);
  rref(m);
  x.assign(cols, K{});
  for (size_t rr = 0; rr < rows; ++rr) {
    size_t lead = cols + 1;
    for (size_t cc = 0; cc <= cols; ++cc)
      if (!is_zero(m[rr][cc])) {
        lead = cc;
        break;
      }
    if (lead == cols) return false;  // 0 = nonzero
    if (lead > cols) continue;       // zero row
    x[lead] = m[rr][cols];
  }
  return true;
}

}  // namespace grw

#endif
