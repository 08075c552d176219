// Exact linear algebra over the rationals: elimination, rank, kernels,
// affine solving and determinants.
#pragma once

#include "tropfan/exact.hpp"

#include <optional>
#include <vector>

namespace tropfan {

/// Reduced row echelon form over a field scalar.
template <typename Field>
struct RowEchelon {
  Mat<Field> r;
  std::vector<Eigen::Index> pivot_cols;

  Eigen::Index rank() const { return static_cast<Eigen::Index>(pivot_cols.size()); }
};

template <typename Field>
RowEchelon<Field> row_echelon(Mat<Field> m) {
  RowEchelon<Field> out;
  Eigen::Index row = 0;
  for (Eigen::Index c = 0; c < m.cols() && row < m.rows(); ++c) {
    Eigen::Index p = -1;
    for (Eigen::Index i = row; i < m.rows(); ++i)
      if (m(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != row) m.row(p).swap(m.row(row));
    const Field inv = Field(1) / m(row, c);
    for (Eigen::Index j = c; j < m.cols(); ++j) m(row, j) *= inv;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, c) == 0) continue;
      const Field f = m(i, c);
      for (Eigen::Index j = c; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    out.pivot_cols.push_back(c);
    ++row;
  }
  out.r = std::move(m);
  return out;
}

Eigen::Index rank(const RatMat& m);
Eigen::Index rank(const IntMat& m);

/// Basis of {x : m x = 0} over Q.
std::vector<RatVec> kernel_basis(const RatMat& m);

/// Z-basis of {x in Z^n : m x = 0}, returned as rows.
IntMat integer_kernel(const IntMat& m);

struct AffineSolution {
  RatVec particular;
  std::vector<RatVec> kernel;
};

/// Solves a x = b. Inconsistent systems yield nullopt.
std::optional<AffineSolution> solve_affine(const RatMat& a, const RatVec& b);

/// Coordinates c with c^T * basis_rows == v, if v lies in the row span.
std::optional<RatVec> row_coordinates(const RatMat& basis_rows, const RatVec& v);

/// Inverse of a square matrix. Throws NotFullRank if singular.
RatMat inverse(const RatMat& m);

/// Fraction-free (Bareiss) determinant of a square integer matrix.
Integer determinant(const IntMat& m);
Rational determinant(const RatMat& m);

/// Integer matrix whose rows span the forms vanishing on the rows of `m`
/// (a Z-basis of the annihilator lattice in the dual).
IntMat annihilator(const IntMat& rows);

/// True iff v lies in the Q-span of the rows.
bool in_row_span(const RatMat& rows, const RatVec& v);

}  // namespace tropfan
