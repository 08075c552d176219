// Morphisms of fans: image fans, preimages, multiplicities and degrees.
#pragma once

#include "tropfan/tropical.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace tropfan {

/// A linear map with integer matrix (M x N) sending |source| into |target|.
/// The target carries weights (default 1) for multiplicities and degrees.
class FanMorphism {
 public:
  FanMorphism() = default;
  /// Validated construction; throws NotIntoTarget with a witness.
  FanMorphism(WeightedFan source, Fan target, IntMat matrix,
              std::vector<Integer> target_weights = {});
  /// Skips the support check, for maps known to be morphisms.
  static FanMorphism trusted(WeightedFan source, Fan target, IntMat matrix,
                             std::vector<Integer> target_weights = {});

  const WeightedFan& source() const { return source_; }
  const Fan& target() const { return target_; }
  const IntMat& matrix() const { return matrix_; }
  /// Weight of the maximal target cone with index i.
  Integer target_weight(std::size_t i) const;
  WeightedFan weighted_target() const;

  /// f is injective on V_sigma for the source cone with index i.
  bool injective_on(std::size_t i) const;

 private:
  WeightedFan source_;
  Fan target_;
  IntMat matrix_;
  std::vector<Integer> target_weights_;
};

FanMorphism morphism_new(const WeightedFan& source, const Fan& target, const IntMat& matrix);

/// Full-dimensional pieces of sigma cut by the hyperplanes of `forms`.
std::vector<Cone> split_by_forms(const Cone& sigma, const std::vector<IntVec>& forms);

/// The image fan with weights sum omega(sigma) |Lambda'_sigma' / f(Lambda_sigma)|.
/// `reverse_forms` harvests the cutting forms in the opposite order.
WeightedFan image_fan(const FanMorphism& f, bool reverse_forms = false);
bool check_pushforward_balanced(const FanMorphism& f);

/// |Lambda'_{sigma'} / f(Lambda_sigma)| for source cone i and target cone j.
Integer lattice_image_index(const FanMorphism& f, std::size_t i, std::size_t j);
/// (omega_X(sigma) / omega_Y(sigma')) |Lambda'_{sigma'} / f(Lambda_sigma)|.
Rational lattice_multiplicity(const FanMorphism& f, std::size_t i, std::size_t j);

struct Preimage {
  RatVec point;
  std::size_t source_cone = 0;
  std::size_t target_cone = 0;
  Rational multiplicity;
};

/// Preimages of a generic point q. Throws NotGeneric if q is not in the
/// interior of a maximal target cone or lies in the image of a source cone
/// of smaller dimension.
std::vector<Preimage> preimages(const FanMorphism& f, const RatVec& q);

/// A random point in the interior of a random maximal target cone, with
/// integer coefficients in [1, bound] on its rays.
RatVec sample_target_point(const Fan& target, std::mt19937_64& rng, long long bound = 1000000);

struct DegreeResult {
  Rational degree;
  std::vector<RatVec> points;
  std::vector<Rational> sums;
};

/// Sum of multiplicities over preimages at `trials` generic points; all sums
/// must agree (DegreeMismatch otherwise). The certificate documents that the
/// target is irreducible.
DegreeResult degree(const FanMorphism& f, const IrreducibilityCertificate& target_certificate,
                    int trials, std::uint64_t seed, int retries = 100);

/// |det| of f restricted to V_sigma in the marked bases of sigma (source cone
/// i) and sigma' (target cone j). Throws SingularRestriction.
Rational det_multiplicity(const MarkedFan& source, const IntMat& matrix, std::size_t i,
                          const MarkedFan& target, std::size_t j);

}  // namespace tropfan
