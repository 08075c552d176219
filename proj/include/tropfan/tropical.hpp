// Weighted and marked fans, balancing, refinements and irreducibility.
#pragma once

#include "tropfan/fan.hpp"

#include <optional>
#include <vector>

namespace tropfan {

/// A pure-dimensional fan with a positive integer weight on each maximal cone.
/// `weights()[k]` belongs to the cone `fan().maximal()[k]`.
class WeightedFan {
 public:
  WeightedFan() = default;
  WeightedFan(Fan fan, std::vector<Integer> weights);
  static WeightedFan unit(Fan fan);

  const Fan& fan() const { return fan_; }
  const std::vector<Integer>& weights() const { return weights_; }
  /// Weight of the maximal cone with fan index `cone_index`.
  const Integer& weight_of(std::size_t cone_index) const;
  Eigen::Index dim() const { return fan_.dim(); }
  Eigen::Index ambient_rank() const { return fan_.ambient_rank(); }
  bool empty() const { return fan_.empty(); }

 private:
  Fan fan_;
  std::vector<Integer> weights_;
  std::vector<std::size_t> slot_;
};

/// A pure simplicial fan with an integral generator chosen on every ray.
/// `markings()[k]` belongs to the ray `fan().of_dim(1)[k]`.
class MarkedFan {
 public:
  MarkedFan() = default;
  MarkedFan(Fan fan, std::vector<IntVec> markings);
  /// Marks every ray by its primitive generator.
  static MarkedFan primitive(Fan fan);

  const Fan& fan() const { return fan_; }
  const std::vector<IntVec>& markings() const { return markings_; }
  const IntVec& marking(std::size_t ray_index) const;
  /// Markings of the rays of cone i, in the order of `cone(i).rays()`.
  std::vector<IntVec> cone_markings(std::size_t i) const;

 private:
  Fan fan_;
  std::vector<IntVec> markings_;
  std::vector<std::size_t> slot_;
};

struct BalanceReport {
  bool balanced = true;
  std::optional<std::size_t> tau;  ///< violating codimension one cone
  IntVec residual;                 ///< weighted sum reduced modulo Lambda_tau

  explicit operator bool() const { return balanced; }
};

BalanceReport is_balanced(const WeightedFan& x);
WeightedFan marked_to_weighted(const MarkedFan& m);
BalanceReport is_balanced_marked(const MarkedFan& m);

/// True when the maximal cones of y cover sigma.
bool covers(const Fan& y, const Cone& sigma);

/// X intersected with y, weighted through the minimal containing cone of X.
/// Throws SupportNotContained unless |y| contains |X|.
WeightedFan refine_onto(const WeightedFan& x, const Fan& y);
bool is_refinement(const WeightedFan& y, const WeightedFan& x);
bool equivalent(const WeightedFan& x, const WeightedFan& y);

/// Multiplies all weights by lambda. Throws NonIntegralWeight.
WeightedFan scale(const Rational& lambda, const WeightedFan& x);
WeightedFan product_weighted(const WeightedFan& x, const WeightedFan& y);

/// Basis of the rational weight functions (indexed like `f.maximal()`)
/// satisfying every balancing condition; each generator has its first
/// nonzero entry positive.
std::vector<RatVec> balancing_weight_space(const Fan& f);

struct IrreducibilityCertificate {
  enum class Kind { FullSpace, Line, StandardL1, ProductOfIrreducibles, WeightSpaceCertificate };
  Kind kind = Kind::FullSpace;
  /// Product: the factors split the coordinates at `split`.
  Eigen::Index split = 0;
  std::vector<IrreducibilityCertificate> factors;
  /// Weight space certificate: the positive generator.
  RatVec weight_generator;
};

const char* kind_name(IrreducibilityCertificate::Kind k);

/// A certificate that x is irreducible, when one of the known patterns
/// applies. An empty result does not mean x is reducible.
std::optional<IrreducibilityCertificate> certify_irreducible(const WeightedFan& x);

}  // namespace tropfan
