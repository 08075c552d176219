#include "tropfan/linalg.hpp"

#include "tropfan/errors.hpp"
#include "tropfan/normal_form.hpp"

namespace tropfan {

Eigen::Index rank(const RatMat& m) { return row_echelon(m).rank(); }

Eigen::Index rank(const IntMat& m) { return row_echelon<Rational>(to_rational(m)).rank(); }

std::vector<RatVec> kernel_basis(const RatMat& m) {
  const auto ech = row_echelon(m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (auto c : ech.pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<RatVec> basis;
  for (Eigen::Index free = 0; free < m.cols(); ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    RatVec x = RatVec::Zero(m.cols());
    x(free) = 1;
    for (Eigen::Index i = 0; i < ech.rank(); ++i)
      x(ech.pivot_cols[static_cast<std::size_t>(i)]) = -ech.r(i, free);
    basis.push_back(std::move(x));
  }
  return basis;
}

IntMat integer_kernel(const IntMat& m) {
  // u * m^T = h; rows of u matching zero rows of h span the integer kernel.
  const IntMat mt = m.transpose();
  const auto hnf = hermite_normal_form<Integer>(mt);
  const Eigen::Index r = hnf.rank();
  return hnf.u.bottomRows(mt.rows() - r);
}

std::optional<AffineSolution> solve_affine(const RatMat& a, const RatVec& b) {
  RatMat aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  const auto ech = row_echelon(aug);
  for (auto c : ech.pivot_cols)
    if (c == a.cols()) return std::nullopt;
  AffineSolution sol;
  sol.particular = RatVec::Zero(a.cols());
  for (Eigen::Index i = 0; i < ech.rank(); ++i)
    sol.particular(ech.pivot_cols[static_cast<std::size_t>(i)]) = ech.r(i, a.cols());
  sol.kernel = kernel_basis(a);
  return sol;
}

std::optional<RatVec> row_coordinates(const RatMat& basis_rows, const RatVec& v) {
  auto sol = solve_affine(basis_rows.transpose(), v);
  if (!sol) return std::nullopt;
  return sol->particular;
}

RatMat inverse(const RatMat& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw Error(Errc::DimensionMismatch, "inverse of non-square matrix");
  RatMat aug(n, 2 * n);
  aug.leftCols(n) = m;
  aug.rightCols(n) = RatMat::Identity(n, n);
  const auto ech = row_echelon(aug);
  if (ech.rank() < n || (n > 0 && ech.pivot_cols.back() >= n))
    throw Error(Errc::NotFullRank, "matrix is singular");
  return ech.r.rightCols(n);
}

Integer determinant(const IntMat& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  if (n == 0) return 1;
  IntMat a = m;
  Integer prev = 1;
  int sign = 1;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      Eigen::Index p = -1;
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (a(i, k) != 0) {
          p = i;
          break;
        }
      if (p < 0) return 0;
      a.row(k).swap(a.row(p));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

Rational determinant(const RatMat& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  RatMat a = m;
  Rational det = 1;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = -1;
    for (Eigen::Index i = k; i < n; ++i)
      if (a(i, k) != 0) {
        p = i;
        break;
      }
    if (p < 0) return 0;
    if (p != k) {
      a.row(k).swap(a.row(p));
      det = -det;
    }
    det *= a(k, k);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      const Rational f = a(i, k) / a(k, k);
      for (Eigen::Index j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

IntMat annihilator(const IntMat& rows) { return integer_kernel(rows); }

bool in_row_span(const RatMat& rows, const RatVec& v) {
  RatMat aug(rows.rows() + 1, rows.cols());
  aug.topRows(rows.rows()) = rows;
  aug.row(rows.rows()) = v.transpose();
  return rank(aug) == rank(rows);
}

}  // namespace tropfan
