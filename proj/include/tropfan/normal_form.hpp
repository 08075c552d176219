// Hermite and Smith normal forms over an exact integral scalar type.
//
// Both routines are templated on the scalar so they run on `Integer`
// (arbitrary precision) as well as on machine integers in tests. All
// transformations are tracked so callers can verify `u * m == h` and
// `u * m * v == s` exactly.
#pragma once

#include "tropfan/exact.hpp"

#include <utility>
#include <vector>

namespace tropfan {

template <typename Scalar>
struct HermiteForm {
  Mat<Scalar> h;  ///< row-style HNF of the input
  Mat<Scalar> u;  ///< unimodular, u * m == h
  std::vector<Eigen::Index> pivot_cols;  ///< pivot column of row i, i < rank

  Eigen::Index rank() const { return static_cast<Eigen::Index>(pivot_cols.size()); }
};

template <typename Scalar>
struct SmithForm {
  Mat<Scalar> s;  ///< diagonal, d1 | d2 | ... >= 0
  Mat<Scalar> u;  ///< unimodular on the left
  Mat<Scalar> v;  ///< unimodular on the right

  std::vector<Scalar> diagonal() const {
    std::vector<Scalar> d;
    for (Eigen::Index i = 0; i < std::min(s.rows(), s.cols()); ++i) d.push_back(s(i, i));
    return d;
  }
};

namespace detail {

template <typename Scalar>
Scalar ext_gcd(const Scalar& a, const Scalar& b, Scalar& s, Scalar& t) {
  Scalar old_r = a, r = b, old_s = 1, cur_s = 0, old_t = 0, cur_t = 1;
  while (r != 0) {
    Scalar q = old_r / r;
    Scalar tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * cur_s;
    old_s = cur_s;
    cur_s = tmp;
    tmp = old_t - q * cur_t;
    old_t = cur_t;
    cur_t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  s = old_s;
  t = old_t;
  return old_r;
}

template <typename Scalar>
Scalar floor_quot(const Scalar& a, const Scalar& b) {
  Scalar q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

// Replaces rows (i, j) of m by (s*ri + t*rj, -b/g*ri + a/g*rj); determinant 1.
template <typename Scalar>
void combine_rows(Mat<Scalar>& m, Eigen::Index i, Eigen::Index j, const Scalar& s,
                  const Scalar& t, const Scalar& x, const Scalar& y) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Scalar ri = m(i, c), rj = m(j, c);
    m(i, c) = s * ri + t * rj;
    m(j, c) = x * ri + y * rj;
  }
}

template <typename Scalar>
void combine_cols(Mat<Scalar>& m, Eigen::Index i, Eigen::Index j, const Scalar& s,
                  const Scalar& t, const Scalar& x, const Scalar& y) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Scalar ci = m(r, i), cj = m(r, j);
    m(r, i) = s * ci + t * cj;
    m(r, j) = x * ci + y * cj;
  }
}

}  // namespace detail

/// Row-style Hermite normal form: pivots positive, entries above a pivot
/// reduced into [0, pivot), zero rows at the bottom.
template <typename Scalar>
HermiteForm<Scalar> hermite_normal_form(const Mat<Scalar>& m) {
  HermiteForm<Scalar> out;
  out.h = m;
  out.u = Mat<Scalar>::Identity(m.rows(), m.rows());
  Mat<Scalar>& h = out.h;
  Mat<Scalar>& u = out.u;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < h.cols() && r < h.rows(); ++c) {
    for (Eigen::Index i = r + 1; i < h.rows(); ++i) {
      if (h(i, c) == 0) continue;
      Scalar a = h(r, c), b = h(i, c), s, t;
      Scalar g = detail::ext_gcd(a, b, s, t);
      Scalar x = -(b / g), y = a / g;
      detail::combine_rows(h, r, i, s, t, x, y);
      detail::combine_rows(u, r, i, s, t, x, y);
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      h.row(r) = -h.row(r);
      u.row(r) = -u.row(r);
    }
    for (Eigen::Index k = 0; k < r; ++k) {
      Scalar q = detail::floor_quot(h(k, c), h(r, c));
      if (q == 0) continue;
      h.row(k) -= q * h.row(r);
      u.row(k) -= q * u.row(r);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  return out;
}

/// Smith normal form with transformations: u * m * v == s.
template <typename Scalar>
SmithForm<Scalar> smith_normal_form(const Mat<Scalar>& m) {
  SmithForm<Scalar> out;
  out.s = m;
  out.u = Mat<Scalar>::Identity(m.rows(), m.rows());
  out.v = Mat<Scalar>::Identity(m.cols(), m.cols());
  Mat<Scalar>& s = out.s;
  const Eigen::Index rows = s.rows(), cols = s.cols();
  for (Eigen::Index t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      // Bring the smallest nonzero entry of the trailing block to (t, t).
      Eigen::Index bi = -1, bj = -1;
      Scalar best = 0;
      for (Eigen::Index i = t; i < rows; ++i)
        for (Eigen::Index j = t; j < cols; ++j) {
          if (s(i, j) == 0) continue;
          Scalar a = s(i, j) < 0 ? Scalar(-s(i, j)) : s(i, j);
          if (bi < 0 || a < best) {
            best = a;
            bi = i;
            bj = j;
          }
        }
      if (bi < 0) return out;  // trailing block is zero
      if (bi != t) {
        s.row(t).swap(s.row(bi));
        out.u.row(t).swap(out.u.row(bi));
      }
      if (bj != t) {
        s.col(t).swap(s.col(bj));
        out.v.col(t).swap(out.v.col(bj));
      }
      bool clean = true;
      for (Eigen::Index i = t + 1; i < rows; ++i) {
        if (s(i, t) == 0) continue;
        if (s(i, t) % s(t, t) == 0) {
          const Scalar q = s(i, t) / s(t, t);
          s.row(i) -= q * s.row(t);
          out.u.row(i) -= q * out.u.row(t);
          continue;
        }
        Scalar a = s(t, t), b = s(i, t), x, y;
        Scalar g = detail::ext_gcd(a, b, x, y);
        detail::combine_rows(s, t, i, x, y, Scalar(-(b / g)), Scalar(a / g));
        detail::combine_rows(out.u, t, i, x, y, Scalar(-(b / g)), Scalar(a / g));
      }
      for (Eigen::Index j = t + 1; j < cols; ++j) {
        if (s(t, j) == 0) continue;
        if (s(t, j) % s(t, t) == 0) {
          const Scalar q = s(t, j) / s(t, t);
          s.col(j) -= q * s.col(t);
          out.v.col(j) -= q * out.v.col(t);
          continue;
        }
        Scalar a = s(t, t), b = s(t, j), x, y;
        Scalar g = detail::ext_gcd(a, b, x, y);
        detail::combine_cols(s, t, j, x, y, Scalar(-(b / g)), Scalar(a / g));
        detail::combine_cols(out.v, t, j, x, y, Scalar(-(b / g)), Scalar(a / g));
      }
      for (Eigen::Index i = t + 1; i < rows; ++i)
        if (s(i, t) != 0) clean = false;
      if (!clean) continue;
      // Enforce divisibility of the trailing block by the pivot.
      Eigen::Index bad = -1;
      for (Eigen::Index i = t + 1; i < rows && bad < 0; ++i)
        for (Eigen::Index j = t + 1; j < cols; ++j)
          if (s(i, j) % s(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      s.row(t) += s.row(bad);
      out.u.row(t) += out.u.row(bad);
    }
    if (s(t, t) < 0) {
      s.row(t) = -s.row(t);
      out.u.row(t) = -out.u.row(t);
    }
  }
  return out;
}

}  // namespace tropfan
