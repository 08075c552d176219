#include "tropfan/fan.hpp"

#include "tropfan/errors.hpp"

#include <algorithm>
#include <random>

namespace tropfan {

namespace {

std::string describe(const Cone& c) {
  std::string s = "{";
  for (const auto& g : c.generators()) s += to_string(g);
  return s + "}";
}

bool meet_in_common_face(const Cone& a, const Cone& b) {
  if (a.is_face_of(b) || b.is_face_of(a)) return true;
  const Cone both = a.intersect(b);
  return both.is_face_of(a) && both.is_face_of(b);
}

}  // namespace

bool cone_less(const Cone& a, const Cone& b) {
  if (a.dim() != b.dim()) return a.dim() < b.dim();
  const auto ga = a.generators(), gb = b.generators();
  const std::size_t n = std::min(ga.size(), gb.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = lex_compare(ga[i], gb[i]); c != 0) return c < 0;
  return ga.size() < gb.size();
}

Fan Fan::from_cones(const std::vector<Cone>& cones, Eigen::Index ambient_rank,
                    const FanValidation& check) {
  std::unordered_map<std::string, bool> seen;
  std::vector<Cone> stack;
  for (const auto& c : cones) {
    if (c.ambient_rank() != ambient_rank)
      throw Error(Errc::DimensionMismatch, "cone in a different ambient space");
    if (seen.emplace(c.key(), true).second) stack.push_back(c);
  }
  std::vector<Cone> all;
  std::unordered_map<std::string, std::vector<std::string>> faces_of;
  while (!stack.empty()) {
    Cone c = std::move(stack.back());
    stack.pop_back();
    auto& keys = faces_of[c.key()];
    for (auto& face : c.codim_one_faces()) {
      keys.push_back(face.key());
      if (seen.emplace(face.key(), true).second) stack.push_back(std::move(face));
    }
    all.push_back(std::move(c));
  }
  std::vector<std::vector<std::string>> face_keys;
  face_keys.reserve(all.size());
  for (const auto& c : all) face_keys.push_back(std::move(faces_of[c.key()]));
  return from_complete(std::move(all), std::move(face_keys), ambient_rank, check);
}

Fan Fan::from_complete(std::vector<Cone> cones, std::vector<std::vector<std::string>> face_keys,
                       Eigen::Index ambient_rank, const FanValidation& check) {
  Fan f;
  f.ambient_ = ambient_rank;
  std::vector<std::size_t> order(cones.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return cone_less(cones[a], cones[b]); });
  std::vector<std::vector<std::string>> keys;
  keys.reserve(order.size());
  f.cones_.reserve(order.size());
  for (auto i : order) {
    f.cones_.push_back(std::move(cones[i]));
    keys.push_back(std::move(face_keys[i]));
  }
  f.index(std::move(keys));
  if (check.mode != FanValidation::Mode::Trusted) f.validate(check);
  return f;
}

void Fan::index(std::vector<std::vector<std::string>> face_keys) {
  if (face_keys.empty()) {
    std::sort(cones_.begin(), cones_.end(), cone_less);
    for (const auto& c : cones_) {
      std::vector<std::string> keys;
      for (const auto& face : c.codim_one_faces()) keys.push_back(face.key());
      face_keys.push_back(std::move(keys));
    }
  }
  by_key_.clear();
  for (std::size_t i = 0; i < cones_.size(); ++i) by_key_.emplace(cones_[i].key(), i);
  facets_.assign(cones_.size(), {});
  cofacets_.assign(cones_.size(), {});
  for (std::size_t i = 0; i < cones_.size(); ++i) {
    for (const auto& key : face_keys[i]) {
      auto it = by_key_.find(key);
      if (it == by_key_.end()) throw Error(Errc::NotAFan, "cone set is not closed under faces");
      facets_[i].push_back(it->second);
      cofacets_[it->second].push_back(i);
    }
    std::sort(facets_[i].begin(), facets_[i].end());
  }
  maximal_.clear();
  for (std::size_t i = 0; i < cones_.size(); ++i) {
    std::sort(cofacets_[i].begin(), cofacets_[i].end());
    if (cofacets_[i].empty()) maximal_.push_back(i);
  }
}

void Fan::validate(const FanValidation& check) const {
  const std::size_t m = maximal_.size();
  bool exhaustive = check.mode == FanValidation::Mode::Exhaustive;
  if (check.mode == FanValidation::Mode::Auto) exhaustive = cones_.size() <= check.exhaustive_limit;
  auto fail = [&](std::size_t a, std::size_t b) {
    throw Error(Errc::NotAFan, "cones " + describe(cones_[a]) + " and " + describe(cones_[b]) +
                                   " do not meet in a common face");
  };
  if (exhaustive) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (!meet_in_common_face(cones_[maximal_[i]], cones_[maximal_[j]]))
          fail(maximal_[i], maximal_[j]);
    return;
  }
  if (m < 2) return;
  std::mt19937_64 rng(check.seed);
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  for (std::size_t s = 0; s < check.samples; ++s) {
    const std::size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    if (!meet_in_common_face(cones_[maximal_[i]], cones_[maximal_[j]]))
      fail(maximal_[i], maximal_[j]);
  }
}

Eigen::Index Fan::dim() const {
  Eigen::Index d = -1;
  for (const auto& c : cones_) d = std::max(d, c.dim());
  return d;
}

std::optional<std::size_t> Fan::find(const Cone& c) const {
  auto it = by_key_.find(c.key());
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> Fan::of_dim(Eigen::Index d) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cones_.size(); ++i)
    if (cones_[i].dim() == d) out.push_back(i);
  return out;
}

bool Fan::is_pure() const {
  const Eigen::Index d = dim();
  for (auto i : maximal_)
    if (cones_[i].dim() != d) return false;
  return true;
}

bool Fan::is_simplicial() const {
  for (auto i : maximal_)
    if (!cones_[i].is_simplicial()) return false;
  return true;
}

bool Fan::support_contains(const RatVec& p) const {
  for (auto i : maximal_)
    if (cones_[i].contains(p)) return true;
  return false;
}

Fan halfspace_fan(const IntVec& form) {
  if (is_zero(form)) throw Error(Errc::ZeroForm, "half-space fan of the zero form");
  const Eigen::Index n = form.size();
  const IntMat f = form.transpose();
  const IntMat none(0, n);
  std::vector<Cone> cones{Cone::from_inequalities(f, none, n), Cone::from_inequalities(none, f, n),
                          Cone::from_inequalities(none, IntMat(-f), n)};
  return Fan::from_cones(cones, n, {FanValidation::Mode::Trusted});
}

Fan full_space_fan(Eigen::Index ambient_rank) {
  return Fan::from_cones({Cone::full_space(ambient_rank)}, ambient_rank,
                         {FanValidation::Mode::Trusted});
}

std::vector<IntVec> standard_L_rays(int n) {
  std::vector<IntVec> u;
  u.push_back(IntVec::Constant(n, Integer(-1)));
  for (int i = 0; i < n; ++i) u.push_back(IntVec::Unit(n, i));
  return u;
}

Fan standard_L(int k, int n) {
  if (n < 0 || k < 0 || k > n) throw Error(Errc::BadRange, "standard_L needs 0 <= k <= n");
  const auto u = standard_L_rays(n);
  std::vector<Cone> cones;
  // All k-subsets of {0..n}; faces follow from closure.
  std::vector<bool> sel(static_cast<std::size_t>(n + 1), false);
  std::fill(sel.begin(), sel.begin() + k, true);
  do {
    std::vector<IntVec> gens;
    for (int i = 0; i <= n; ++i)
      if (sel[static_cast<std::size_t>(i)]) gens.push_back(u[static_cast<std::size_t>(i)]);
    cones.push_back(Cone::simplicial(gens, n));
  } while (std::prev_permutation(sel.begin(), sel.end()));
  return Fan::from_cones(cones, n, {FanValidation::Mode::Trusted});
}

Fan product_fan(const Fan& x, const Fan& y) {
  std::vector<Cone> cones;
  std::vector<std::vector<std::string>> keys(x.size() * y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) cones.push_back(x.cone(i).product(y.cone(j)));
  auto at = [&](std::size_t i, std::size_t j) -> const Cone& { return cones[i * y.size() + j]; };
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) {
      auto& k = keys[i * y.size() + j];
      for (auto fi : x.facets_of(i)) k.push_back(at(fi, j).key());
      for (auto fj : y.facets_of(j)) k.push_back(at(i, fj).key());
    }
  return Fan::from_complete(std::move(cones), std::move(keys), x.ambient_rank() + y.ambient_rank(),
                            {FanValidation::Mode::Trusted});
}

Fan intersect_fans(const Fan& x, const Fan& y) {
  if (x.ambient_rank() != y.ambient_rank())
    throw Error(Errc::DimensionMismatch, "fans live in different spaces");
  std::vector<Cone> cones;
  for (auto i : x.maximal())
    for (auto j : y.maximal()) cones.push_back(x.cone(i).intersect(y.cone(j)));
  if (cones.empty()) return Fan::from_cones({}, x.ambient_rank(), {FanValidation::Mode::Trusted});
  return Fan::from_cones(cones, x.ambient_rank(), {FanValidation::Mode::Trusted});
}

std::optional<std::size_t> locate_point(const Fan& x, const RatVec& p) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x.cone(i).contains_in_relative_interior(p)) return i;
  return std::nullopt;
}

const Cone& minimal_containing_cone(const Fan& x, const Cone& s) {
  auto idx = locate_point(x, to_rational(s.interior_point()));
  if (!idx || !x.cone(*idx).contains(s))
    throw Error(Errc::NotContained, "cone is not contained in a cone of the fan");
  return x.cone(*idx);
}

}  // namespace tropfan
