// JSON forms of fans, morphisms, degrees and counting problems.
//
// Integers are JSON numbers when |x| <= 2^53 and decimal strings otherwise;
// rationals are always strings ("p/q" or "p").
#pragma once

#include "tropfan/enumeration.hpp"

#include "json.hpp"

namespace tropfan {

using Json = nlohmann::json;

Json to_json(const Integer& x);
Json to_json(const Rational& x);
Json to_json(const IntVec& v);
Json to_json(const RatVec& v);
Integer integer_from_json(const Json& j);
Rational rational_from_json(const Json& j);
IntVec int_vec_from_json(const Json& j);
RatVec rat_vec_from_json(const Json& j);
IntMat int_mat_from_json(const Json& rows);

/// Maximal cones as generator lists (rays, then +/- lineality basis).
Json fan_to_json(const Fan& f);
Json weighted_fan_to_json(const WeightedFan& w);
Fan fan_from_json(const Json& j);
/// Missing "weights" means weight 1 everywhere.
WeightedFan weighted_fan_from_json(const Json& j);

/// { "matrix": [[...]], "source": fan, "target": fan }. Validated.
FanMorphism morphism_from_json(const Json& j);
Json morphism_to_json(const FanMorphism& f);

Json degree_to_json(const Degree& d);
Degree degree_from_json(const Json& j);

Json constraint_to_json(const Constraint& c);
Constraint constraint_from_json(const Json& j, Eigen::Index r);

/// A counting job: the problem, the seed, and whether base points are drawn.
struct CountConfig {
  CountProblem problem;
  std::uint64_t seed = 1;
  int trials = 1;
  bool auto_points = true;
};

/// { "degree": {...}, "n": 4, "constraints": [{"end": 1, "point": [..] | "auto",
///   "directions": [[..], ...]}], "cross_ratio": {"split": [1, 2], "length": "5"},
///   "seed": 1, "trials": 3 }
CountConfig count_config_from_json(const Json& j);

Json solution_to_json(const CurveSolution& s);
Json count_result_to_json(const CountResult& r);

Json read_json_file(const std::string& path);

}  // namespace tropfan
