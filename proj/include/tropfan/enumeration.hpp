// Counting rational tropical curves through points and affine subspaces.
#pragma once

#include "tropfan/moduli.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tropfan {

/// The marked end `end` must map into point + span(directions).
/// `directions` is r x k with independent integral columns; k = 0 is a point.
struct Constraint {
  int end = 1;
  RatVec point;
  IntMat directions;

  static Constraint at_point(int end, RatVec p);
  static Constraint on_subspace(int end, RatVec base, IntMat directions);
  Eigen::Index codim() const { return point.size() - directions.cols(); }
};

/// The first four marked ends must give the point length * v_J of M_{0,4},
/// with J one of {1,2}, {1,3}, {1,4}.
struct CrossRatio {
  Split split = 0;
  Rational length = 1;
};

struct CountProblem {
  Degree delta;
  int n = 0;  ///< contracted ends
  std::vector<Constraint> constraints;
  std::optional<CrossRatio> cross_ratio;

  int ends() const { return n + static_cast<int>(delta.size()); }
  /// Throws DimensionMismatch / WrongDimension / BadRange.
  void validate() const;
};

struct CurveSolution {
  MarkedAbstractCurve curve;
  RatVec root;  ///< position of the vertex at x_1
  Integer multiplicity;
};

struct CountResult {
  Rational labeled;
  Integer group_order;
  Rational unlabeled;
  std::vector<CurveSolution> solutions;
  std::uint64_t types_checked = 0;
  /// Seed of the sampled constraints, when count_generic drew them.
  std::uint64_t seed = 0;
};

struct CountOptions {
  /// Check every trivalent type with exact arithmetic, without pruning.
  bool naive = false;
  /// Worker threads for the pruned search; results do not depend on it.
  unsigned threads = 1;
};

/// Sum of |det| over curves of the labeled problem; throws NotGeneric when
/// the constraints meet a wall or the image of a degenerate cone.
CountResult count(const CountProblem& problem, const CountOptions& opts = {});

/// count() with a cross-ratio condition; returns the labeled degree.
Rational kontsevich_degree(const CountProblem& problem, const CountOptions& opts = {});

/// Product of factorials of the multiplicities of the distinct entries.
Integer group_order(const Degree& delta);

/// Shape of a constraint: which end, and the subspace directions.
struct ConstraintShape {
  int end = 1;
  IntMat directions;  ///< r x k
};

/// Integer base points in [-bound, bound] from a seeded generator.
std::vector<Constraint> sample_generic_constraints(const std::vector<ConstraintShape>& shape, int r,
                                                   std::uint64_t seed, long long bound = 1000000);
/// Point conditions on ends 1..n.
std::vector<Constraint> sample_generic_constraints(int r, const Degree& delta, int n,
                                                   std::uint64_t seed, long long bound = 1000000);

/// Re-samples the base points (seed, seed+1, ...) until the problem is generic.
/// `problem.constraints` supplies the shape. Throws RetriesExhausted.
CountResult count_generic(CountProblem problem, std::uint64_t seed, int retries = 100,
                          const CountOptions& opts = {});

/// Multiplicity of a solution computed as a lattice index through the
/// morphism (ev_i composed with the quotients, and ft4) on its cone.
Rational lattice_multiplicity_of(const CountProblem& problem, const CurveSolution& s);

}  // namespace tropfan
