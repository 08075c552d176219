#include "tropfan/exact.hpp"

#include "tropfan/errors.hpp"

#include <sstream>

namespace tropfan {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NotFullRank: return "NotFullRank";
    case Errc::NotInLattice: return "NotInLattice";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::NotCodimOne: return "NotCodimOne";
    case Errc::NotAFan: return "NotAFan";
    case Errc::ZeroForm: return "ZeroForm";
    case Errc::BadRange: return "BadRange";
    case Errc::NotContained: return "NotContained";
    case Errc::SupportNotContained: return "SupportNotContained";
    case Errc::NonIntegralWeight: return "NonIntegralWeight";
    case Errc::NotIntoTarget: return "NotIntoTarget";
    case Errc::NotGeneric: return "NotGeneric";
    case Errc::DegreeMismatch: return "DegreeMismatch";
    case Errc::SingularRestriction: return "SingularRestriction";
    case Errc::BadSplit: return "BadSplit";
    case Errc::TooLarge: return "TooLarge";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::WrongDimension: return "WrongDimension";
    case Errc::RetriesExhausted: return "RetriesExhausted";
    case Errc::Precondition: return "Precondition";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

IntVec to_integer(const RatVec& v) {
  IntVec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (denominator_of(v(i)) != 1)
      throw Error(Errc::NotInLattice, "fractional entry " + v(i).str());
    out(i) = numerator_of(v(i));
  }
  return out;
}

IntMat to_integer(const RatMat& m) {
  IntMat out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (denominator_of(m(i, j)) != 1)
        throw Error(Errc::NotInLattice, "fractional entry " + m(i, j).str());
      out(i, j) = numerator_of(m(i, j));
    }
  return out;
}

IntVec clear_denominators(const RatVec& v) {
  Integer l = 1;
  for (Eigen::Index i = 0; i < v.size(); ++i) l = lcm(l, denominator_of(v(i)));
  IntVec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out(i) = numerator_of(v(i)) * (l / denominator_of(v(i)));
  return out;
}

IntVec make_primitive(const IntVec& v) {
  Integer g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) g = gcd(g, v(i));
  if (g == 0 || g == 1) return v;
  IntVec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i) / g;
  return out;
}

bool is_zero(const IntVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) != 0) return false;
  return true;
}

bool is_zero(const RatVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) != 0) return false;
  return true;
}

Integer dot(const IntVec& a, const IntVec& b) {
  Integer s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
  return s;
}

Rational dot(const RatVec& a, const RatVec& b) {
  Rational s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
  return s;
}

int lex_compare(const IntVec& a, const IntVec& b) {
  const Eigen::Index n = std::min(a.size(), b.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a(i) < b(i)) return -1;
    if (b(i) < a(i)) return 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

std::string to_string(const IntVec& v) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i);
  os << ')';
  return os.str();
}

std::string to_string(const RatVec& v) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i);
  os << ')';
  return os.str();
}

IntMat rows_to_matrix(const std::vector<IntVec>& rows, Eigen::Index cols) {
  IntMat m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return m;
}

std::vector<IntVec> matrix_to_rows(const IntMat& m) {
  std::vector<IntVec> rows;
  rows.reserve(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.emplace_back(m.row(i).transpose());
  return rows;
}

}  // namespace tropfan
