// Fans: finite face-closed collections of cones meeting along common faces.
#pragma once

#include "tropfan/cone.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace tropfan {

/// How `Fan::from_cones` checks that cones meet in common faces.
struct FanValidation {
  enum class Mode { Auto, Exhaustive, Sampled, Trusted };
  Mode mode = Mode::Auto;
  /// In Auto mode, exhaustive below this many cones, sampled above.
  std::size_t exhaustive_limit = 100000;
  std::size_t samples = 2000;
  std::uint64_t seed = 1;
};

/// Orders cones by dimension, then by their sorted generator lists.
bool cone_less(const Cone& a, const Cone& b);

class Fan {
 public:
  Fan() = default;

  /// Closes `cones` under faces and validates the intersection condition.
  /// Throws NotAFan with a witness pair on failure.
  static Fan from_cones(const std::vector<Cone>& cones, Eigen::Index ambient_rank,
                        const FanValidation& check = {});

  /// For cone sets already closed under faces: `face_keys[i]` lists the keys
  /// of the codimension one faces of `cones[i]`. Validation as in `from_cones`.
  static Fan from_complete(std::vector<Cone> cones, std::vector<std::vector<std::string>> face_keys,
                           Eigen::Index ambient_rank, const FanValidation& check = {});

  Eigen::Index ambient_rank() const { return ambient_; }
  /// -1 for the empty fan.
  Eigen::Index dim() const;
  bool empty() const { return cones_.empty(); }
  std::size_t size() const { return cones_.size(); }
  const std::vector<Cone>& cones() const { return cones_; }
  const Cone& cone(std::size_t i) const { return cones_[i]; }

  std::optional<std::size_t> find(const Cone& c) const;
  /// Inclusion-maximal cones, in cone order.
  const std::vector<std::size_t>& maximal() const { return maximal_; }
  std::vector<std::size_t> of_dim(Eigen::Index d) const;
  bool is_pure() const;
  bool is_simplicial() const;

  /// Faces of codimension one of cone i.
  const std::vector<std::size_t>& facets_of(std::size_t i) const { return facets_[i]; }
  /// Cones having cone i as a face of codimension one.
  const std::vector<std::size_t>& cofacets_of(std::size_t i) const { return cofacets_[i]; }

  bool support_contains(const RatVec& p) const;

  /// Throws NotAFan if some pair of inclusion-maximal cones fails to meet
  /// in a common face.
  void validate(const FanValidation& check) const;

 private:
  /// `face_keys[i]` lists the keys of the codimension one faces of cone i.
  void index(std::vector<std::vector<std::string>> face_keys = {});

  Eigen::Index ambient_ = 0;
  std::vector<Cone> cones_;
  std::unordered_map<std::string, std::size_t> by_key_;
  std::vector<std::size_t> maximal_;
  std::vector<std::vector<std::size_t>> facets_;
  std::vector<std::vector<std::size_t>> cofacets_;
};

/// The fan {f = 0}, {f >= 0}, {f <= 0}. Throws ZeroForm.
Fan halfspace_fan(const IntVec& form);
/// The fan with the single cone R^N.
Fan full_space_fan(Eigen::Index ambient_rank);
/// L^n_k: cones spanned by at most k of u_0 = -(e_1+...+e_n), e_1, ..., e_n.
/// Throws BadRange unless 0 <= k <= n.
Fan standard_L(int k, int n);
/// The rays u_0, ..., u_n of `standard_L`.
std::vector<IntVec> standard_L_rays(int n);

Fan product_fan(const Fan& x, const Fan& y);
Fan intersect_fans(const Fan& x, const Fan& y);

/// Inclusion-minimal cone of x containing s. Throws NotContained.
const Cone& minimal_containing_cone(const Fan& x, const Cone& s);
/// Index of the cone whose relative interior contains p.
std::optional<std::size_t> locate_point(const Fan& x, const RatVec& p);

}  // namespace tropfan
