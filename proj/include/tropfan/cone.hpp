// Integral polyhedral cones with both generator and halfspace descriptions.
#pragma once

#include "tropfan/exact.hpp"
#include "tropfan/lattice.hpp"

#include <string>
#include <vector>

namespace tropfan {

/// Lineality space and extreme rays of {x : eq x = 0, ineq x >= 0}, computed
/// by the double description method in exact integer arithmetic.
struct ConeGenerators {
  IntMat lineality;  ///< rows
  IntMat rays;       ///< rows, primitive
};
ConeGenerators double_description(const IntMat& equalities, const IntMat& inequalities,
                                  Eigen::Index ambient_rank);

/// A cone in R^N cut out by integral forms. Cones may contain lines.
///
/// Both descriptions are canonical: the lineality and equality bases are in
/// Hermite normal form, rays are primitive representatives orthogonal to the
/// lineality space, facets are primitive forms orthogonal to the equalities.
/// Two cones with the same point set therefore have the same `key()`.
class Cone {
 public:
  Cone() = default;

  static Cone from_generators(const std::vector<IntVec>& generators, Eigen::Index ambient_rank);
  static Cone from_generators(const IntMat& generator_rows);
  static Cone from_inequalities(const IntMat& equalities, const IntMat& inequalities,
                                Eigen::Index ambient_rank);
  /// Cone over linearly independent rays; skips the double description.
  static Cone simplicial(const std::vector<IntVec>& rays, Eigen::Index ambient_rank);
  /// Rays independent modulo the lineality space spanned by `lineality`.
  static Cone simplicial(const std::vector<IntVec>& rays, const std::vector<IntVec>& lineality,
                         Eigen::Index ambient_rank);
  static Cone origin(Eigen::Index ambient_rank);
  static Cone full_space(Eigen::Index ambient_rank);

  Eigen::Index ambient_rank() const { return ambient_; }
  Eigen::Index dim() const { return dim_; }
  const IntMat& lineality() const { return lineality_; }
  const IntMat& rays() const { return rays_; }
  const IntMat& equalities() const { return equalities_; }
  const IntMat& facets() const { return facets_; }
  /// The saturated lattice of the linear span.
  const Lattice& span_lattice() const { return span_lattice_; }
  const std::string& key() const { return key_; }

  /// Rays followed by +- the lineality basis, sorted lexicographically.
  std::vector<IntVec> generators() const;

  bool is_simplicial() const { return lineality_.rows() == 0 && rays_.rows() == dim_; }
  /// Simplicial modulo the lineality space.
  bool is_simplicial_mod_lineality() const { return lineality_.rows() + rays_.rows() == dim_; }

  bool contains(const RatVec& p) const;
  bool contains(const IntVec& p) const;
  bool contains(const Cone& other) const;
  bool contains_in_relative_interior(const RatVec& p) const;
  /// True when this cone is a face of `sigma`.
  bool is_face_of(const Cone& sigma) const;

  Cone intersect(const Cone& other) const;
  Cone product(const Cone& other) const;
  /// Image under the linear map `matrix` (M x N).
  Cone image(const IntMat& matrix) const;

  /// All faces, including the cone itself and its lineality space.
  std::vector<Cone> faces() const;
  /// Faces of codimension one.
  std::vector<Cone> codim_one_faces() const;
  /// The face on which the given facet inequalities are tight.
  Cone face_on(const std::vector<Eigen::Index>& facet_indices) const;

  /// A point in the relative interior (sum of the rays).
  IntVec interior_point() const;

  friend bool operator==(const Cone& a, const Cone& b) { return a.key_ == b.key_; }

  /// Canonical key for the cone with these (already canonical) parts.
  static std::string make_key(Eigen::Index ambient_rank, const IntMat& lineality,
                              const std::vector<IntVec>& sorted_rays);

 private:
  void finalize(const ConeGenerators& v, const ConeGenerators& dual);

  Eigen::Index ambient_ = 0;
  Eigen::Index dim_ = 0;
  IntMat lineality_;
  IntMat rays_;
  IntMat equalities_;
  IntMat facets_;
  Lattice span_lattice_;
  std::string key_;
};

/// Orthogonal projection of v onto the complement of the row span, scaled to
/// a primitive integral vector (zero if v lies in the span).
IntVec project_out(const IntMat& rows, const IntVec& v);

/// Representative of the primitive normal vector u_{sigma/tau}: its class
/// generates Lambda_sigma / Lambda_tau and points into sigma. The returned
/// vector is reduced modulo the HNF basis of Lambda_tau. Throws NotCodimOne.
IntVec normal_vector(const Cone& tau, const Cone& sigma);

}  // namespace tropfan
