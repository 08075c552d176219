// Exact scalar types and dense matrix aliases shared by every module.
#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace tropfan {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                  boost::multiprecision::et_off>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMat = Mat<Integer>;
using IntVec = Vec<Integer>;
using RatMat = Mat<Rational>;
using RatVec = Vec<Rational>;

inline Integer numerator_of(const Rational& q) {
  return boost::multiprecision::numerator(q);
}
inline Integer denominator_of(const Rational& q) {
  return boost::multiprecision::denominator(q);
}

inline Integer gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(a, b);
}
inline Integer lcm(const Integer& a, const Integer& b) {
  return boost::multiprecision::lcm(a, b);
}
inline Integer abs(const Integer& a) { return a < 0 ? Integer(-a) : a; }
inline Rational abs(const Rational& a) { return a < 0 ? Rational(-a) : a; }

/// Extended gcd: returns g = gcd(a, b) >= 0 with s*a + t*b = g.
inline Integer extended_gcd(const Integer& a, const Integer& b, Integer& s,
                            Integer& t) {
  Integer old_r = a, r = b, old_s = 1, cur_s = 0, old_t = 0, cur_t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
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

/// Floor division for integers (rounds toward negative infinity).
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

/// Euclidean remainder in [0, |b|).
inline Integer mod_floor(const Integer& a, const Integer& b) {
  Integer r = a % b;
  if (r < 0) r += abs(b);
  return r;
}

template <typename Scalar>
Vec<Scalar> make_vec(std::initializer_list<long long> entries) {
  Vec<Scalar> v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (long long e : entries) v(i++) = Scalar(e);
  return v;
}

inline IntVec int_vec(std::initializer_list<long long> entries) {
  return make_vec<Integer>(entries);
}
inline RatVec rat_vec(std::initializer_list<long long> entries) {
  return make_vec<Rational>(entries);
}

/// Row-major construction helper: `int_mat({{1,2},{3,4}})`.
inline IntMat int_mat(std::initializer_list<std::initializer_list<long long>> rows) {
  const auto nrows = static_cast<Eigen::Index>(rows.size());
  const auto ncols =
      nrows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.begin()->size());
  IntMat m(nrows, ncols);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (long long e : row) m(i, j++) = Integer(e);
    ++i;
  }
  return m;
}

inline RatVec to_rational(const IntVec& v) { return v.cast<Rational>(); }
inline RatMat to_rational(const IntMat& m) { return m.cast<Rational>(); }

/// True when every entry has denominator 1.
inline bool is_integral(const RatVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (denominator_of(v(i)) != 1) return false;
  return true;
}

/// Converts an integral rational vector; throws if any entry is fractional.
IntVec to_integer(const RatVec& v);
IntMat to_integer(const RatMat& m);

/// Clears denominators: returns the integer vector lcm(den) * v.
IntVec clear_denominators(const RatVec& v);

/// Divides by the gcd of the entries (sign preserved). Zero stays zero.
IntVec make_primitive(const IntVec& v);

bool is_zero(const IntVec& v);
bool is_zero(const RatVec& v);

Integer dot(const IntVec& a, const IntVec& b);
Rational dot(const RatVec& a, const RatVec& b);

/// Lexicographic comparison of equal-length integer vectors.
int lex_compare(const IntVec& a, const IntVec& b);

std::string to_string(const IntVec& v);
std::string to_string(const RatVec& v);

/// Stacks the vectors as rows of a matrix with `cols` columns.
IntMat rows_to_matrix(const std::vector<IntVec>& rows, Eigen::Index cols);
std::vector<IntVec> matrix_to_rows(const IntMat& m);

}  // namespace tropfan
