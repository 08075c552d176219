// Sublattices of Z^N: saturation, indices and primitive vectors.
#pragma once

#include "tropfan/exact.hpp"

#include <optional>
#include <span>
#include <vector>

namespace tropfan {

/// A sublattice of Z^ambient_rank, identified with the Z-row-span of `basis`.
/// The basis is kept in Hermite normal form, so equal lattices compare equal.
class Lattice {
 public:
  Lattice() = default;
  /// Rows of `generators` need not be independent; the HNF basis is kept.
  Lattice(Eigen::Index ambient_rank, const IntMat& generators);

  static Lattice standard(Eigen::Index ambient_rank);

  Eigen::Index ambient_rank() const { return ambient_rank_; }
  Eigen::Index rank() const { return basis_.rows(); }
  const IntMat& basis() const { return basis_; }

  bool contains(const IntVec& v) const;
  /// Coordinates of v in the basis, if v is in the Q-span (may be fractional).
  std::optional<RatVec> coordinates(const RatVec& v) const;
  /// Reduces v modulo the lattice (canonical coset representative).
  IntVec reduce(const IntVec& v) const;

  friend bool operator==(const Lattice& a, const Lattice& b) {
    return a.ambient_rank_ == b.ambient_rank_ && a.basis_ == b.basis_;
  }

 private:
  Eigen::Index ambient_rank_ = 0;
  IntMat basis_;
};

/// (Q-span of generators) intersected with Z^ambient_rank.
Lattice saturate(std::span<const IntVec> generators, Eigen::Index ambient_rank);
Lattice saturate(const IntMat& generator_rows);

/// |ambient / <sub>|. Throws NotFullRank if the spans differ and
/// NotInLattice if a generator lies outside the ambient lattice.
Integer lattice_index(std::span<const IntVec> sub_generators, const Lattice& ambient);
Integer lattice_index(const IntMat& sub_rows, const Lattice& ambient);

/// The coprime integral vector on the ray through v. Throws ZeroVector.
IntVec primitive_generator(const RatVec& v);
IntVec primitive_generator(const IntVec& v);

}  // namespace tropfan
