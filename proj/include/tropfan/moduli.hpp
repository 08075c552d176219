// Moduli fans of rational tropical curves and fans of labeled curves in R^r.
//
// Labels are 1-based in the API. A split is a bitmask over labels (bit i-1
// for label i), stored on the side containing label 1.
#pragma once

#include "tropfan/morphism.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace tropfan {

using Split = std::uint64_t;

inline Split full_mask(int n) { return n >= 64 ? ~Split{0} : (Split{1} << n) - 1; }
inline Split label_bit(int label) { return Split{1} << (label - 1); }
Split canonical_split(Split s, int n);
bool splits_compatible(Split a, Split b, int n);
/// Labels of a mask, ascending.
std::vector<int> split_labels(Split s);

struct TreeType {
  int n = 0;
  std::vector<Split> splits;  ///< canonical and sorted

  /// Throws BadSplit unless the splits form a valid tree type.
  static TreeType make(int n, std::vector<Split> splits);
  bool trivalent() const { return static_cast<int>(splits.size()) == n - 3; }
  friend bool operator==(const TreeType& a, const TreeType& b) {
    return a.n == b.n && a.splits == b.splits;
  }
  friend bool operator<(const TreeType& a, const TreeType& b) {
    return a.n != b.n ? a.n < b.n : a.splits < b.splits;
  }
};

struct MarkedAbstractCurve {
  TreeType type;
  std::vector<Rational> lengths;  ///< aligned with type.splits, all positive
};

/// The tree of a type with explicit vertices. Leaf edges have b == -1.
struct TreeGraph {
  struct Edge {
    int a = 0;
    int b = -1;
    int label = 0;    ///< for leaf edges
    Split side_b = 0;  ///< labels behind b (bounded edges)
  };
  int vertices = 0;
  std::vector<Edge> edges;  ///< leaf edges first, in label order
  std::vector<std::vector<int>> incident;
};
TreeGraph tree_graph(const TreeType& t);

/// All tree types on n labels (only trivalent ones if asked), sorted.
std::vector<TreeType> enumerate_tree_types(int n, bool only_trivalent);
/// Trivalent types by leaf insertion, without storing them.
void for_each_trivalent_type(int n, const std::function<void(const TreeType&)>& visit);
/// (2n-5)!!
std::uint64_t trivalent_type_count(int n);

/// Coordinates for Q_n = R^{C(n,2)} / im Phi_n in which Lambda_n = Z^dim.
class QnSpace {
 public:
  QnSpace() = default;
  explicit QnSpace(int n);

  int n() const { return n_; }
  Eigen::Index pair_count() const { return static_cast<Eigen::Index>(n_) * (n_ - 1) / 2; }
  Eigen::Index dim() const { return pair_count() - n_; }
  /// Index of the pair {i, j} in lexicographic order.
  Eigen::Index pair_index(int i, int j) const;
  const IntMat& phi() const { return phi_; }
  /// Pair coordinates kept by the chart.
  const std::vector<Eigen::Index>& chart() const { return chart_; }
  /// Rows: basis of Lambda_n in chart coordinates.
  const RatMat& lattice_basis() const { return basis_; }
  /// dim x C(n,2): class of x in lattice coordinates.
  const RatMat& projection() const { return proj_; }
  /// C(n,2) x dim: a representative for lattice coordinates.
  const RatMat& lift() const { return lift_; }

  RatVec to_lattice(const RatVec& x) const { return proj_ * x; }
  /// v_I in lattice coordinates (always integral).
  IntVec ray(Split s) const;

 private:
  int n_ = 0;
  IntMat phi_;
  std::vector<Eigen::Index> chart_;
  RatMat basis_;
  RatMat proj_;
  RatMat lift_;
};

RatVec dist_vector(const MarkedAbstractCurve& c);
/// Representative of v_I in R^{C(n,2)}. Throws BadSplit.
RatVec v_I(int n, Split s);

struct ModuliFan {
  QnSpace space;
  MarkedFan fan;
  /// Split of each ray, aligned with fan.fan().of_dim(1).
  std::vector<Split> ray_splits;

  std::size_t cone_of(const TreeType& t) const;
};

struct ModuliOptions {
  std::uint64_t max_cones = 200000;
  /// Exhaustive fan validation up to this n, sampled above.
  int exhaustive_up_to = 6;
};

/// M_{0,n} in lattice coordinates of Q_n, marked by the v_I. Throws TooLarge.
ModuliFan build_m0n(int n, const ModuliOptions& opts = {});

/// The type and lengths of the curve at a point of the fan (lattice coordinates).
MarkedAbstractCurve curve_at(const ModuliFan& m, const RatVec& point);

/// Matrix of the map Q_n -> Q_{n-1} forgetting label n, in lattice coordinates.
IntMat forgetful_matrix(const QnSpace& from, const QnSpace& to);
FanMorphism forgetful_morphism(const ModuliFan& from, const ModuliFan& to);
/// The stabilized curve with label n removed.
MarkedAbstractCurve forget_last(const MarkedAbstractCurve& c);

struct Degree {
  int r = 0;
  std::vector<IntVec> entries;

  /// Throws BadRange on zero entries or nonzero sum.
  static Degree make(int r, std::vector<IntVec> entries);
  /// d copies of each of -e_0 = (1,...,1), -e_1, ..., -e_r.
  static Degree projective(int r, int d);
  std::size_t size() const { return entries.size(); }
};

/// Directions of the bounded edges, aligned with t.splits, oriented away from
/// label 1. Labels 1..n are contracted; label n+k carries delta.entries[k-1].
std::vector<IntVec> directions(const TreeType& t, int n, const Degree& delta);

struct StableMapsFan {
  int n = 0;
  Degree delta;
  ModuliFan moduli;  ///< M_{0,N} with N = n + #delta
  WeightedFan fan;   ///< moduli x R^r
};

StableMapsFan stable_maps_fan(int n, const Degree& delta, const ModuliOptions& opts = {});

/// ev_i on Q_N x R^r in lattice coordinates (r x (dim + r)).
IntMat ev_matrix(const QnSpace& q, int i, int n, const Degree& delta);
FanMorphism ev_morphism(const StableMapsFan& s, int i);
/// Direct evaluation: root + sum of l(E) v(E) along the path from x_1 to x_i.
RatVec evaluate(const MarkedAbstractCurve& c, const RatVec& root, int i, int n, const Degree& delta);

/// Forgets all labels but 1..4 and the R^r factor: Q_N x R^r -> Q_4.
IntMat ft4_matrix(const QnSpace& q, const QnSpace& q4, Eigen::Index r);
FanMorphism ft4_morphism(const StableMapsFan& s, const ModuliFan& m04);

}  // namespace tropfan
