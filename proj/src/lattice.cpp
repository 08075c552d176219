#include "tropfan/lattice.hpp"

#include "tropfan/errors.hpp"
#include "tropfan/linalg.hpp"
#include "tropfan/normal_form.hpp"

namespace tropfan {

Lattice::Lattice(Eigen::Index ambient_rank, const IntMat& generators)
    : ambient_rank_(ambient_rank) {
  if (generators.rows() == 0) {
    basis_.resize(0, ambient_rank);
    return;
  }
  const auto hnf = hermite_normal_form<Integer>(generators);
  basis_ = hnf.h.topRows(hnf.rank());
}

Lattice Lattice::standard(Eigen::Index ambient_rank) {
  return Lattice(ambient_rank, IntMat::Identity(ambient_rank, ambient_rank));
}

std::optional<RatVec> Lattice::coordinates(const RatVec& v) const {
  return row_coordinates(to_rational(basis_), v);
}

bool Lattice::contains(const IntVec& v) const {
  auto c = coordinates(to_rational(v));
  return c && is_integral(*c);
}

IntVec Lattice::reduce(const IntVec& v) const {
  IntVec out = v;
  for (Eigen::Index i = 0; i < basis_.rows(); ++i) {
    Eigen::Index p = 0;
    while (basis_(i, p) == 0) ++p;
    const Integer q = floor_div(out(p), basis_(i, p));
    if (q != 0) out -= q * basis_.row(i).transpose();
  }
  return out;
}

Lattice saturate(const IntMat& generator_rows) {
  const Eigen::Index n = generator_rows.cols();
  // Forms vanishing on the span, then the integer points they cut out.
  const IntMat forms = integer_kernel(generator_rows);
  const IntMat points = integer_kernel(forms);
  return Lattice(n, points);
}

Lattice saturate(std::span<const IntVec> generators, Eigen::Index ambient_rank) {
  return saturate(rows_to_matrix({generators.begin(), generators.end()}, ambient_rank));
}

Integer lattice_index(const IntMat& sub_rows, const Lattice& ambient) {
  const RatMat basis = to_rational(ambient.basis());
  IntMat coords(sub_rows.rows(), ambient.rank());
  for (Eigen::Index i = 0; i < sub_rows.rows(); ++i) {
    auto c = row_coordinates(basis, to_rational(IntVec(sub_rows.row(i).transpose())));
    if (!c) throw Error(Errc::NotFullRank, "generator outside the ambient span");
    if (!is_integral(*c)) throw Error(Errc::NotInLattice, "generator not in ambient lattice");
    coords.row(i) = to_integer(*c).transpose();
  }
  if (rank(coords) != ambient.rank())
    throw Error(Errc::NotFullRank, "sublattice does not span the ambient lattice");
  if (ambient.rank() == 0) return 1;
  const auto snf = smith_normal_form<Integer>(coords);
  Integer index = 1;
  for (const auto& d : snf.diagonal())
    if (d != 0) index *= d;
  return index;
}

Integer lattice_index(std::span<const IntVec> sub_generators, const Lattice& ambient) {
  return lattice_index(
      rows_to_matrix({sub_generators.begin(), sub_generators.end()}, ambient.ambient_rank()),
      ambient);
}

IntVec primitive_generator(const RatVec& v) {
  if (is_zero(v)) throw Error(Errc::ZeroVector, "primitive generator of zero vector");
  return make_primitive(clear_denominators(v));
}

IntVec primitive_generator(const IntVec& v) {
  if (is_zero(v)) throw Error(Errc::ZeroVector, "primitive generator of zero vector");
  return make_primitive(v);
}

}  // namespace tropfan
