#include "tropfan/moduli.hpp"

#include "tropfan/errors.hpp"
#include "tropfan/linalg.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <unordered_map>

namespace tropfan {

namespace {

int popcount(Split s) { return std::popcount(s); }

IntMat integral_or_throw(const RatMat& m, const char* what) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (denominator_of(m(i, j)) != 1) throw Error(Errc::NotInLattice, what);
  return to_integer(m);
}

// Leaf insertion on 0-based bit masks; `bounded` holds one side of each edge.
void insert_leaf(int k, int n, std::vector<Split>& bounded,
                 const std::function<void(const TreeType&)>& visit) {
  if (k == n) {
    TreeType t;
    t.n = n;
    for (auto s : bounded) t.splits.push_back(canonical_split(s, n));
    std::sort(t.splits.begin(), t.splits.end());
    visit(t);
    return;
  }
  const Split full = full_mask(k), bit = Split{1} << k;
  auto grow = [&](Split x) {
    std::vector<Split> next;
    next.reserve(bounded.size() + 1);
    for (auto t : bounded) {
      const bool beside = (x & ~t) == 0 || ((full ^ x) & ~t) == 0;
      next.push_back(beside ? (t | bit) : t);
    }
    return next;
  };
  for (int j = 0; j < k; ++j) {
    const Split x = Split{1} << j;
    auto next = grow(x);
    next.push_back(x | bit);
    insert_leaf(k + 1, n, next, visit);
  }
  for (std::size_t e = 0; e < bounded.size(); ++e) {
    const Split x = bounded[e];
    auto next = grow(x);
    next.push_back(x);
    insert_leaf(k + 1, n, next, visit);
  }
}

std::vector<std::pair<int, int>> pairs_of(int n) {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) out.emplace_back(i, j);
  return out;
}

IntVec label_direction(int k, int n, const Degree& delta) {
  if (k <= n) return IntVec::Zero(delta.r);
  return delta.entries[static_cast<std::size_t>(k - n - 1)];
}

}  // namespace

Split canonical_split(Split s, int n) {
  const Split f = full_mask(n);
  s &= f;
  return (s & 1) ? s : (f ^ s);
}

bool splits_compatible(Split a, Split b, int n) {
  const Split f = full_mask(n);
  return (a & b) == 0 || (a & ~b & f) == 0 || (~a & b & f) == 0 || (~a & ~b & f) == 0;
}

std::vector<int> split_labels(Split s) {
  std::vector<int> out;
  for (int i = 0; s; ++i, s >>= 1)
    if (s & 1) out.push_back(i + 1);
  return out;
}

TreeType TreeType::make(int n, std::vector<Split> splits) {
  if (n < 3 || n > 63) throw Error(Errc::BadRange, "tree types need 3 <= n <= 63 labels");
  for (auto& s : splits) {
    if ((s & ~full_mask(n)) != 0) throw Error(Errc::BadSplit, "split uses unknown labels");
    s = canonical_split(s, n);
    const int c = popcount(s);
    if (c < 2 || c > n - 2) throw Error(Errc::BadSplit, "split sides need at least two labels");
  }
  std::sort(splits.begin(), splits.end());
  if (std::adjacent_find(splits.begin(), splits.end()) != splits.end())
    throw Error(Errc::BadSplit, "repeated split");
  if (static_cast<int>(splits.size()) > n - 3) throw Error(Errc::BadSplit, "too many splits");
  for (std::size_t i = 0; i < splits.size(); ++i)
    for (std::size_t j = i + 1; j < splits.size(); ++j)
      if (!splits_compatible(splits[i], splits[j], n))
        throw Error(Errc::BadSplit, "incompatible splits");
  return TreeType{n, std::move(splits)};
}

TreeGraph tree_graph(const TreeType& t) {
  const int n = t.n;
  const Split f = full_mask(n);
  TreeGraph g;
  g.vertices = 1;
  std::vector<std::vector<std::pair<Split, int>>> parts(1);
  for (int i = 0; i < n; ++i) {
    g.edges.push_back({0, -1, i + 1, 0});
    parts[0].emplace_back(Split{1} << i, i);
  }
  for (auto s : t.splits) {
    int v = -1;
    for (int u = 0; u < g.vertices && v < 0; ++u) {
      int in = 0, out = 0;
      for (const auto& [mask, e] : parts[static_cast<std::size_t>(u)]) {
        if ((mask & ~s) == 0) ++in;
        else if ((mask & s) == 0) ++out;
        else in = out = -1000;
      }
      if (in >= 2 && out >= 2) v = u;
    }
    if (v < 0) throw Error(Errc::BadSplit, "split does not fit the tree");
    const int w = g.vertices++;
    const int e = static_cast<int>(g.edges.size());
    g.edges.push_back({v, w, 0, s});
    std::vector<std::pair<Split, int>> stay, move;
    for (const auto& p : parts[static_cast<std::size_t>(v)])
      ((p.first & ~s) == 0 ? move : stay).push_back(p);
    for (const auto& [mask, id] : move) {
      auto& edge = g.edges[static_cast<std::size_t>(id)];
      if (edge.a == v) edge.a = w;
      else edge.b = w;
    }
    stay.emplace_back(s, e);
    move.emplace_back(f ^ s, e);
    parts[static_cast<std::size_t>(v)] = std::move(stay);
    parts.push_back(std::move(move));
  }
  g.incident.assign(static_cast<std::size_t>(g.vertices), {});
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    g.incident[static_cast<std::size_t>(g.edges[e].a)].push_back(static_cast<int>(e));
    if (g.edges[e].b >= 0) g.incident[static_cast<std::size_t>(g.edges[e].b)].push_back(static_cast<int>(e));
  }
  return g;
}

void for_each_trivalent_type(int n, const std::function<void(const TreeType&)>& visit) {
  if (n < 3 || n > 63) throw Error(Errc::BadRange, "tree types need 3 <= n <= 63 labels");
  std::vector<Split> bounded;
  insert_leaf(3, n, bounded, visit);
}

std::uint64_t trivalent_type_count(int n) {
  std::uint64_t c = 1;
  for (int k = 3; k <= 2 * n - 5; k += 2) c *= static_cast<std::uint64_t>(k);
  return c;
}

std::vector<TreeType> enumerate_tree_types(int n, bool only_trivalent) {
  std::vector<TreeType> top;
  for_each_trivalent_type(n, [&](const TreeType& t) { top.push_back(t); });
  if (only_trivalent) {
    std::sort(top.begin(), top.end());
    return top;
  }
  std::set<TreeType> all;
  for (const auto& t : top) {
    const std::size_t k = t.splits.size();
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << k); ++sub) {
      TreeType face{n, {}};
      for (std::size_t i = 0; i < k; ++i)
        if (sub >> i & 1) face.splits.push_back(t.splits[i]);
      all.insert(std::move(face));
    }
  }
  return {all.begin(), all.end()};
}

QnSpace::QnSpace(int n) : n_(n) {
  if (n < 3 || n > 63) throw Error(Errc::BadRange, "Q_n needs 3 <= n <= 63");
  const Eigen::Index c = pair_count(), d = dim();
  phi_ = IntMat::Zero(c, n);
  for (const auto& [i, j] : pairs_of(n)) {
    phi_(pair_index(i, j), i - 1) = 1;
    phi_(pair_index(i, j), j - 1) = 1;
  }
  // The first n independent rows of Phi are dropped; the rest form the chart.
  std::vector<Eigen::Index> dropped;
  RatMat picked(0, n);
  for (Eigen::Index p = 0; p < c; ++p) {
    RatMat trial(picked.rows() + 1, n);
    trial.topRows(picked.rows()) = picked;
    trial.row(picked.rows()) = to_rational(IntVec(phi_.row(p).transpose())).transpose();
    if (static_cast<Eigen::Index>(dropped.size()) < n && rank(trial) == trial.rows()) {
      picked = trial;
      dropped.push_back(p);
    } else {
      chart_.push_back(p);
    }
  }
  RatMat phi_s(d, n);
  for (Eigen::Index t = 0; t < d; ++t)
    phi_s.row(t) = to_rational(IntVec(phi_.row(chart_[static_cast<std::size_t>(t)]).transpose())).transpose();
  const RatMat correction = phi_s * inverse(picked);
  RatMat chart_map = RatMat::Zero(d, c);
  for (Eigen::Index t = 0; t < d; ++t) chart_map(t, chart_[static_cast<std::size_t>(t)]) = 1;
  for (Eigen::Index u = 0; u < n; ++u)
    chart_map.col(dropped[static_cast<std::size_t>(u)]) = -correction.col(u);

  std::vector<RatVec> gens;
  for (Split s = 1; s < full_mask(n); s += 2) {
    const int k = popcount(s);
    if (k >= 2 && k <= n - 2) gens.push_back(chart_map * v_I(n, s));
  }
  Integer den = 1;
  for (const auto& g : gens)
    for (Eigen::Index i = 0; i < d; ++i) den = lcm(den, denominator_of(g(i)));
  IntMat scaled(static_cast<Eigen::Index>(gens.size()), d);
  for (std::size_t r = 0; r < gens.size(); ++r)
    scaled.row(static_cast<Eigen::Index>(r)) = to_integer(RatVec(gens[r] * Rational(den))).transpose();
  basis_ = to_rational(Lattice(d, scaled).basis()) / Rational(den);
  proj_ = inverse(basis_.transpose()) * chart_map;
  lift_ = RatMat::Zero(c, d);
  for (Eigen::Index t = 0; t < d; ++t)
    lift_.row(chart_[static_cast<std::size_t>(t)]) = basis_.col(t).transpose();
}

Eigen::Index QnSpace::pair_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i < 1 || j > n_ || i == j) throw Error(Errc::BadRange, "no such pair");
  return static_cast<Eigen::Index>(i - 1) * (2 * n_ - i) / 2 + (j - i - 1);
}

IntVec QnSpace::ray(Split s) const { return to_integer(RatVec(proj_ * v_I(n_, s))); }

RatVec v_I(int n, Split s) {
  s = canonical_split(s, n);
  const int k = popcount(s);
  if (k < 2 || k > n - 2) throw Error(Errc::BadSplit, "split sides need at least two labels");
  RatVec x = RatVec::Zero(static_cast<Eigen::Index>(n) * (n - 1) / 2);
  Eigen::Index p = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++p)
      if (((s >> i) ^ (s >> j)) & 1) x(p) = 1;
  return x;
}

RatVec dist_vector(const MarkedAbstractCurve& c) {
  const int n = c.type.n;
  RatVec x = RatVec::Zero(static_cast<Eigen::Index>(n) * (n - 1) / 2);
  for (std::size_t e = 0; e < c.type.splits.size(); ++e) {
    const Split s = c.type.splits[e];
    Eigen::Index p = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++p)
        if (((s >> i) ^ (s >> j)) & 1) x(p) += c.lengths[e];
  }
  return x;
}

std::size_t ModuliFan::cone_of(const TreeType& t) const {
  const Eigen::Index d = space.dim();
  std::vector<IntVec> rays;
  for (auto s : t.splits) rays.push_back(space.ray(s));
  const Cone c = rays.empty() ? Cone::origin(d) : Cone::simplicial(rays, d);
  auto idx = fan.fan().find(c);
  if (!idx) throw Error(Errc::NotContained, "tree type has no cone");
  return *idx;
}

ModuliFan build_m0n(int n, const ModuliOptions& opts) {
  if (n < 3) throw Error(Errc::BadRange, "M_0,n needs n >= 3");
  if (n > 20 || trivalent_type_count(n) > opts.max_cones)
    throw Error(Errc::TooLarge, "M_0," + std::to_string(n) + " has too many cones");
  ModuliFan m{QnSpace(n), {}, {}};
  const Eigen::Index d = m.space.dim();
  std::unordered_map<Split, IntVec> ray_of;
  std::unordered_map<std::string, Split> split_of;
  for (Split s = 1; s < full_mask(n); s += 2) {
    const int k = popcount(s);
    if (k < 2 || k > n - 2) continue;
    IntVec v = m.space.ray(s);
    split_of.emplace(to_string(make_primitive(v)), s);
    ray_of.emplace(s, std::move(v));
  }
  std::unordered_map<Split, IntVec> primitive;
  for (const auto& [s, v] : ray_of) primitive.emplace(s, make_primitive(v));
  auto key_of = [&](const std::vector<Split>& splits, std::size_t skip) {
    std::vector<IntVec> rays;
    for (std::size_t i = 0; i < splits.size(); ++i)
      if (i != skip) rays.push_back(primitive.at(splits[i]));
    std::sort(rays.begin(), rays.end(),
              [](const IntVec& a, const IntVec& b) { return lex_compare(a, b) < 0; });
    return Cone::make_key(d, IntMat(0, d), rays);
  };
  std::vector<Cone> cones;
  std::vector<std::vector<std::string>> face_keys;
  for (const auto& t : enumerate_tree_types(n, false)) {
    std::vector<IntVec> rays;
    for (auto s : t.splits) rays.push_back(ray_of.at(s));
    cones.push_back(rays.empty() ? Cone::origin(d) : Cone::simplicial(rays, d));
    std::vector<std::string> keys;
    for (std::size_t skip = 0; skip < t.splits.size(); ++skip) keys.push_back(key_of(t.splits, skip));
    face_keys.push_back(std::move(keys));
  }
  FanValidation check;
  check.mode = n <= opts.exhaustive_up_to ? FanValidation::Mode::Exhaustive
                                          : FanValidation::Mode::Sampled;
  Fan f = Fan::from_complete(std::move(cones), std::move(face_keys), d, check);
  std::vector<IntVec> marks;
  for (auto i : f.of_dim(1)) {
    const IntVec r = f.cone(i).rays().row(0).transpose();
    const Split s = split_of.at(to_string(r));
    m.ray_splits.push_back(s);
    marks.push_back(ray_of.at(s));
  }
  m.fan = MarkedFan(std::move(f), std::move(marks));
  return m;
}

MarkedAbstractCurve curve_at(const ModuliFan& m, const RatVec& point) {
  const Fan& f = m.fan.fan();
  auto idx = locate_point(f, point);
  if (!idx) throw Error(Errc::NotContained, "point is outside the moduli fan");
  const auto rays = f.of_dim(1);
  std::vector<Split> splits;
  std::vector<IntVec> marks;
  const Cone& c = f.cone(*idx);
  for (Eigen::Index r = 0; r < c.rays().rows(); ++r) {
    const auto ray_idx = *f.find(Cone::simplicial({IntVec(c.rays().row(r).transpose())}, f.ambient_rank()));
    const auto pos = static_cast<std::size_t>(std::lower_bound(rays.begin(), rays.end(), ray_idx) - rays.begin());
    splits.push_back(m.ray_splits[pos]);
    marks.push_back(m.fan.markings()[pos]);
  }
  RatMat basis(static_cast<Eigen::Index>(marks.size()), f.ambient_rank());
  for (std::size_t k = 0; k < marks.size(); ++k)
    basis.row(static_cast<Eigen::Index>(k)) = to_rational(marks[k]).transpose();
  const auto coords = row_coordinates(basis, point);
  std::map<Split, Rational> lengths;
  for (std::size_t k = 0; k < splits.size(); ++k) lengths[splits[k]] = (*coords)(static_cast<Eigen::Index>(k));
  MarkedAbstractCurve out;
  out.type = TreeType::make(m.space.n(), splits);
  for (auto s : out.type.splits) out.lengths.push_back(lengths.at(s));
  return out;
}

IntMat forgetful_matrix(const QnSpace& from, const QnSpace& to) {
  if (to.n() != from.n() - 1) throw Error(Errc::DimensionMismatch, "forgetful map drops one label");
  RatMat p = RatMat::Zero(to.pair_count(), from.pair_count());
  for (const auto& [i, j] : pairs_of(to.n())) p(to.pair_index(i, j), from.pair_index(i, j)) = 1;
  return integral_or_throw(to.projection() * p * from.lift(), "forgetful map leaves the lattice");
}

FanMorphism forgetful_morphism(const ModuliFan& from, const ModuliFan& to) {
  if (to.space.n() < 4) throw Error(Errc::BadRange, "forgetful morphism needs n >= 5");
  const WeightedFan target = marked_to_weighted(to.fan);
  return FanMorphism(marked_to_weighted(from.fan), target.fan(),
                     forgetful_matrix(from.space, to.space), target.weights());
}

MarkedAbstractCurve forget_last(const MarkedAbstractCurve& c) {
  const int n = c.type.n;
  const Split keep = full_mask(n - 1);
  std::map<Split, Rational> merged;
  for (std::size_t e = 0; e < c.type.splits.size(); ++e) {
    const Split s = canonical_split(c.type.splits[e] & keep, n - 1);
    const int k = popcount(s);
    if (k < 2 || k > n - 3) continue;
    merged[s] += c.lengths[e];
  }
  MarkedAbstractCurve out;
  std::vector<Split> splits;
  for (const auto& [s, l] : merged) splits.push_back(s);
  out.type = TreeType::make(n - 1, splits);
  for (auto s : out.type.splits) out.lengths.push_back(merged.at(s));
  return out;
}

Degree Degree::make(int r, std::vector<IntVec> entries) {
  if (r < 1) throw Error(Errc::BadRange, "degree needs r >= 1");
  IntVec sum = IntVec::Zero(r);
  for (const auto& v : entries) {
    if (v.size() != r) throw Error(Errc::DimensionMismatch, "degree entry of wrong length");
    if (is_zero(v)) throw Error(Errc::BadRange, "degree entries must be nonzero");
    sum += v;
  }
  if (!is_zero(sum)) throw Error(Errc::BadRange, "degree entries must sum to zero");
  return Degree{r, std::move(entries)};
}

Degree Degree::projective(int r, int d) {
  std::vector<IntVec> e;
  for (int j = 0; j <= r; ++j)
    for (int c = 0; c < d; ++c)
      e.push_back(j == 0 ? IntVec(IntVec::Constant(r, Integer(1))) : IntVec(-IntVec::Unit(r, j - 1)));
  return make(r, std::move(e));
}

std::vector<IntVec> directions(const TreeType& t, int n, const Degree& delta) {
  const int big_n = n + static_cast<int>(delta.size());
  if (t.n != big_n) throw Error(Errc::DimensionMismatch, "tree has the wrong number of labels");
  std::vector<IntVec> out;
  for (auto s : t.splits) {
    IntVec v = IntVec::Zero(delta.r);
    for (int k = n + 1; k <= big_n; ++k)
      if (!(s & label_bit(k))) v += label_direction(k, n, delta);
    out.push_back(std::move(v));
  }
  return out;
}

StableMapsFan stable_maps_fan(int n, const Degree& delta, const ModuliOptions& opts) {
  if (n < 1) throw Error(Errc::Precondition, "at least one contracted end required");
  const int big_n = n + static_cast<int>(delta.size());
  if (big_n < 3) throw Error(Errc::Precondition, "curves need at least three ends");
  StableMapsFan s;
  s.n = n;
  s.delta = delta;
  s.moduli = build_m0n(big_n, opts);
  s.fan = product_weighted(marked_to_weighted(s.moduli.fan),
                           WeightedFan::unit(full_space_fan(delta.r)));
  return s;
}

IntMat ev_matrix(const QnSpace& q, int i, int n, const Degree& delta) {
  const int big_n = q.n();
  if (big_n != n + static_cast<int>(delta.size()))
    throw Error(Errc::DimensionMismatch, "Q_N does not match n and the degree");
  if (i < 1 || i > n) throw Error(Errc::BadRange, "ev_i needs 1 <= i <= n");
  const Eigen::Index r = delta.r;
  RatMat a = RatMat::Zero(r, q.pair_count());
  const Rational half(1, 2);
  for (int k = 2; k <= big_n; ++k) {
    if (k == i) continue;
    const RatVec v = to_rational(label_direction(k, n, delta));
    a.col(q.pair_index(1, k)) += half * v;
    if (i != 1) a.col(q.pair_index(i, k)) -= half * v;
  }
  RatMat m(r, q.dim() + r);
  m.leftCols(q.dim()) = a * q.lift();
  m.rightCols(r) = RatMat::Identity(r, r);
  return integral_or_throw(m, "evaluation map leaves the lattice");
}

FanMorphism ev_morphism(const StableMapsFan& s, int i) {
  return FanMorphism(s.fan, full_space_fan(s.delta.r), ev_matrix(s.moduli.space, i, s.n, s.delta));
}

RatVec evaluate(const MarkedAbstractCurve& c, const RatVec& root, int i, int n, const Degree& delta) {
  const auto dirs = directions(c.type, n, delta);
  RatVec p = root;
  for (std::size_t e = 0; e < dirs.size(); ++e)
    if (!(c.type.splits[e] & label_bit(i))) p += c.lengths[e] * to_rational(dirs[e]);
  return p;
}

IntMat ft4_matrix(const QnSpace& q, const QnSpace& q4, Eigen::Index r) {
  if (q4.n() != 4 || q.n() < 4) throw Error(Errc::DimensionMismatch, "ft4 maps Q_N to Q_4");
  RatMat p = RatMat::Zero(q4.pair_count(), q.pair_count());
  for (const auto& [i, j] : pairs_of(4)) p(q4.pair_index(i, j), q.pair_index(i, j)) = 1;
  RatMat m = RatMat::Zero(q4.dim(), q.dim() + r);
  m.leftCols(q.dim()) = q4.projection() * p * q.lift();
  return integral_or_throw(m, "forgetful map leaves the lattice");
}

FanMorphism ft4_morphism(const StableMapsFan& s, const ModuliFan& m04) {
  if (s.n < 4) throw Error(Errc::Precondition, "ft4 needs at least four contracted ends");
  const WeightedFan target = marked_to_weighted(m04.fan);
  return FanMorphism(s.fan, target.fan(), ft4_matrix(s.moduli.space, m04.space, s.delta.r),
                     target.weights());
}

}  // namespace tropfan
