#include "doctest.h"

#include "tropfan/cone.hpp"
#include "tropfan/errors.hpp"
#include "tropfan/fan.hpp"
#include "tropfan/linalg.hpp"

#include <random>
#include <set>

using namespace tropfan;

namespace {

std::vector<IntVec> vecs(std::initializer_list<std::initializer_list<long long>> rows) {
  std::vector<IntVec> out;
  for (const auto& r : rows) {
    IntVec v(static_cast<Eigen::Index>(r.size()));
    Eigen::Index i = 0;
    for (long long e : r) v(i++) = e;
    out.push_back(v);
  }
  return out;
}

// Membership oracle from generators alone: p is a nonnegative combination of
// gens, decided by brute force over subsets solved exactly (Caratheodory).
bool in_cone_by_generators(const std::vector<IntVec>& gens, const RatVec& p) {
  const auto k = gens.size();
  if (is_zero(p)) return true;
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    std::vector<IntVec> sub;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) sub.push_back(gens[i]);
    const IntMat m = rows_to_matrix(sub, p.size());
    if (rank(m) != static_cast<Eigen::Index>(sub.size())) continue;
    auto sol = solve_affine(to_rational(IntMat(m.transpose())), p);
    if (!sol) continue;
    bool nonneg = true;
    for (Eigen::Index i = 0; i < sol->particular.size(); ++i)
      if (sol->particular(i) < 0) nonneg = false;
    if (nonneg) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("cones from generators") {
  const Cone o = Cone::from_generators({}, 2);
  CHECK(o.dim() == 0);
  CHECK(o.faces().size() == 1);

  const Cone q = Cone::from_generators(vecs({{1, 0}, {0, 1}}), 2);
  CHECK(q.dim() == 2);
  CHECK(q.rays().rows() == 2);
  CHECK(q.facets().rows() == 2);
  CHECK(q.is_simplicial());
  CHECK(q.faces().size() == 4);

  const Cone h = Cone::from_generators(vecs({{1, 0}, {-1, 0}, {0, 1}}), 2);
  CHECK(h.dim() == 2);
  CHECK(h.lineality() == int_mat({{1, 0}}));
  CHECK(h.rays() == int_mat({{0, 1}}));
  CHECK(h.facets() == int_mat({{0, 1}}));
  const auto hf = h.faces();
  REQUIRE(hf.size() == 2);
  std::set<Eigen::Index> dims;
  for (const auto& f : hf) dims.insert(f.dim());
  CHECK(dims == std::set<Eigen::Index>{1, 2});

  CHECK(Cone::full_space(3).dim() == 3);
  CHECK(Cone::full_space(3).faces().size() == 1);
}

TEST_CASE("halfspace and generator descriptions agree") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    std::vector<IntVec> gens;
    for (int k = 0; k < 2 + trial % 4; ++k) {
      IntVec v(n);
      for (Eigen::Index j = 0; j < n; ++j) v(j) = d(rng);
      gens.push_back(v);
    }
    const Cone c = Cone::from_generators(gens, n);
    const Cone again = Cone::from_generators(c.generators(), n);
    CHECK(again == c);
    const Cone from_h = Cone::from_inequalities(c.equalities(), c.facets(), n);
    CHECK(from_h == c);
    CHECK(c.dim() == rank(rows_to_matrix(gens, n)));
    for (const auto& g : gens) CHECK(c.contains(g));
    for (int probe = 0; probe < 10; ++probe) {
      RatVec p(n);
      for (Eigen::Index j = 0; j < n; ++j) p(j) = d(rng);
      CHECK(c.contains(p) == in_cone_by_generators(gens, p));
    }
    CHECK(c.contains_in_relative_interior(to_rational(c.interior_point())));
  }
}

TEST_CASE("simplicial cones have 2^dim faces") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> d(-4, 4);
  int done = 0;
  while (done < 15) {
    const Eigen::Index n = 2 + done % 3;
    const Eigen::Index k = 1 + done % n;
    std::vector<IntVec> gens;
    for (Eigen::Index i = 0; i < k; ++i) {
      IntVec v(n);
      for (Eigen::Index j = 0; j < n; ++j) v(j) = d(rng);
      gens.push_back(v);
    }
    if (rank(rows_to_matrix(gens, n)) != k) continue;
    const Cone c = Cone::from_generators(gens, n);
    CHECK(c.is_simplicial());
    const auto faces = c.faces();
    CHECK(faces.size() == (std::size_t{1} << k));
    std::set<std::string> ray_keys, gen_keys;
    for (const auto& f : faces) {
      CHECK(f.is_face_of(c));
      if (f.dim() == 1) ray_keys.insert(f.key());
    }
    for (const auto& g : gens) gen_keys.insert(Cone::from_generators({g}, n).key());
    CHECK(ray_keys == gen_keys);
    ++done;
  }
}

TEST_CASE("face relation") {
  const Cone q = Cone::from_generators(vecs({{1, 0}, {0, 1}}), 2);
  const Cone diag = Cone::from_generators(vecs({{1, 1}}), 2);
  const Cone x = Cone::from_generators(vecs({{1, 0}}), 2);
  CHECK(x.is_face_of(q));
  CHECK(!diag.is_face_of(q));
  CHECK(Cone::origin(2).is_face_of(q));
  CHECK(q.is_face_of(q));
  const Cone h = Cone::from_generators(vecs({{1, 0}, {-1, 0}, {0, 1}}), 2);
  CHECK(!Cone::origin(2).is_face_of(h));
}

TEST_CASE("intersection, product and image") {
  const Cone a = Cone::from_inequalities(IntMat(0, 2), int_mat({{1, 0}}), 2);
  const Cone b = Cone::from_inequalities(IntMat(0, 2), int_mat({{-1, 1}}), 2);
  const Cone ab = a.intersect(b);
  CHECK(ab == Cone::from_generators(vecs({{0, 1}, {1, 1}}), 2));
  const Cone p = Cone::from_generators(vecs({{1}}), 1).product(Cone::full_space(1));
  CHECK(p == Cone::from_generators(vecs({{1, 0}, {0, 1}, {0, -1}}), 2));
  const Cone img = Cone::from_generators(vecs({{1, 0}, {0, 1}}), 2).image(int_mat({{1, 1}}));
  CHECK(img == Cone::from_generators(vecs({{1}}), 1));
}

TEST_CASE("project_out") {
  CHECK(project_out(int_mat({{1, 0}}), int_vec({3, 4})) == int_vec({0, 1}));
  CHECK(project_out(int_mat({{1, 1}}), int_vec({2, 0})) == int_vec({1, -1}));
  CHECK(is_zero(project_out(int_mat({{1, 1}}), int_vec({2, 2}))));
}

TEST_CASE("simplicial constructor matches double description") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> d(-5, 5);
  int done = 0;
  while (done < 30) {
    const Eigen::Index n = 2 + done % 4;
    const Eigen::Index k = done % (n + 1);
    std::vector<IntVec> gens;
    for (Eigen::Index i = 0; i < k; ++i) {
      IntVec v(n);
      for (Eigen::Index j = 0; j < n; ++j) v(j) = d(rng);
      gens.push_back(v);
    }
    if (rank(rows_to_matrix(gens, n)) != k) continue;
    const Cone a = Cone::simplicial(gens, n);
    const Cone b = Cone::from_generators(gens, n);
    CHECK(a == b);
    CHECK(a.facets() == b.facets());
    CHECK(a.equalities() == b.equalities());
    CHECK(a.span_lattice() == b.span_lattice());
    ++done;
  }
}

namespace {

Fan quadrant_fan() {
  return Fan::from_cones({Cone::from_generators(vecs({{1, 0}, {0, 1}}), 2)}, 2);
}

// Support membership straight from the definition, for probes.
bool in_support(const std::vector<Cone>& cones, const RatVec& p) {
  for (const auto& c : cones)
    if (c.contains(p)) return true;
  return false;
}

std::vector<RatVec> grid(Eigen::Index n, int radius) {
  std::vector<RatVec> out;
  std::vector<int> x(static_cast<std::size_t>(n), -radius);
  while (true) {
    RatVec p(n);
    for (Eigen::Index i = 0; i < n; ++i) p(i) = x[static_cast<std::size_t>(i)];
    out.push_back(p);
    std::size_t k = 0;
    while (k < x.size() && ++x[k] > radius) x[k++] = -radius;
    if (k == x.size()) break;
  }
  return out;
}

std::vector<Cone> maximal_cones(const Fan& f) {
  std::vector<Cone> out;
  for (auto i : f.maximal()) out.push_back(f.cone(i));
  return out;
}

}  // namespace

TEST_CASE("fan from cones") {
  const Fan rays = Fan::from_cones({Cone::from_generators(vecs({{1, 0}}), 2),
                                    Cone::from_generators(vecs({{0, 1}}), 2), Cone::origin(2)},
                                   2);
  CHECK(rays.size() == 3);
  CHECK(rays.dim() == 1);
  CHECK(rays.maximal().size() == 2);

  const Cone a = Cone::from_inequalities(IntMat(0, 2), int_mat({{1, 0}}), 2);
  const Cone b = Cone::from_inequalities(IntMat(0, 2), int_mat({{-1, 1}}), 2);
  // (1, 2) lies in the interior of both, so their intersection is no face.
  CHECK(a.contains_in_relative_interior(rat_vec({1, 2})));
  CHECK(b.contains_in_relative_interior(rat_vec({1, 2})));
  try {
    Fan::from_cones({a, b}, 2);
    FAIL("expected NotAFan");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotAFan);
  }

  const auto u = standard_L_rays(2);
  std::vector<Cone> lines;
  for (const auto& r : u) lines.push_back(Cone::from_generators({r}, 2));
  const Fan l12 = Fan::from_cones(lines, 2);
  CHECK(l12.size() == 4);
  CHECK(l12.is_pure());
  CHECK(l12.is_simplicial());
}

TEST_CASE("sampled validation catches overlapping cones") {
  const Cone a = Cone::from_inequalities(IntMat(0, 2), int_mat({{1, 0}}), 2);
  const Cone b = Cone::from_inequalities(IntMat(0, 2), int_mat({{-1, 1}}), 2);
  FanValidation check;
  check.mode = FanValidation::Mode::Sampled;
  check.samples = 50;
  CHECK_THROWS_AS(Fan::from_cones({a, b}, 2, check), Error);
}

TEST_CASE("halfspace fan") {
  const Fan h = halfspace_fan(int_vec({1, 0}));
  CHECK(h.size() == 3);
  for (const auto& p : grid(2, 2)) CHECK(h.support_contains(p));
  const Fan h1 = halfspace_fan(int_vec({1}));
  CHECK(h1.size() == 3);
  CHECK(h1.cone(0).dim() == 0);
  const Fan a = halfspace_fan(int_vec({2, 2})), b = halfspace_fan(int_vec({1, 1}));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.cone(i) == b.cone(i));
  CHECK_THROWS_AS(halfspace_fan(int_vec({0, 0})), Error);
}

TEST_CASE("standard L fans") {
  CHECK(standard_L(1, 2).size() == 4);
  CHECK(standard_L(0, 3).size() == 1);
  for (int n = 1; n <= 4; ++n) {
    std::size_t expected = 0, binom = 1;
    for (int j = 0; j <= n; ++j) {
      expected += binom;
      binom = binom * static_cast<std::size_t>(n + 1 - j) / static_cast<std::size_t>(j + 1);
    }
    const Fan l = standard_L(n, n);
    CHECK(l.size() == expected);
    CHECK(l.dim() == n);
  }
  CHECK_THROWS_AS(standard_L(3, 2), Error);
  // Exhaustive validation agrees that L^n_k is a fan.
  const Fan l23 = standard_L(2, 3);
  l23.validate({FanValidation::Mode::Exhaustive});
}

TEST_CASE("product fans") {
  const Fan p = product_fan(standard_L(1, 2), full_space_fan(1));
  CHECK(p.size() == 4);
  CHECK(p.maximal().size() == 3);
  // R^1 as the half-line fan gives the 4 x 3 = 12 cone product.
  const Fan line = halfspace_fan(int_vec({1}));
  CHECK(product_fan(standard_L(1, 2), line).size() == 12);
  const Fan point = Fan::from_cones({Cone::origin(0)}, 0);
  CHECK(product_fan(standard_L(1, 2), point).size() == 4);
  CHECK(product_fan(halfspace_fan(int_vec({1})), halfspace_fan(int_vec({1}))).size() == 9);

  const Fan x = standard_L(1, 2), y = halfspace_fan(int_vec({1, -1}));
  const Fan xy = product_fan(x, y);
  xy.validate({FanValidation::Mode::Exhaustive});
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int t = 0; t < 40; ++t) {
    RatVec p(4);
    for (int i = 0; i < 4; ++i) p(i) = d(rng);
    CHECK(xy.support_contains(p) ==
          (x.support_contains(RatVec(p.head(2))) && y.support_contains(RatVec(p.tail(2)))));
  }
}

TEST_CASE("intersection of fans") {
  const Fan l = standard_L(1, 2);
  const Fan self = intersect_fans(l, l);
  REQUIRE(self.size() == l.size());
  for (std::size_t i = 0; i < l.size(); ++i) CHECK(self.cone(i) == l.cone(i));

  const Fan h = halfspace_fan(int_vec({1, -1}));
  const Fan lh = intersect_fans(l, h);
  lh.validate({FanValidation::Mode::Exhaustive});
  CHECK(lh.of_dim(1).size() == 3);
  for (const auto& p : grid(2, 3))
    CHECK(lh.support_contains(p) == (in_support(maximal_cones(l), p) && h.support_contains(p)));

  const Fan full = intersect_fans(full_space_fan(2), l);
  REQUIRE(full.size() == l.size());
  for (std::size_t i = 0; i < l.size(); ++i) CHECK(full.cone(i) == l.cone(i));

  // A line through the rays splits at the origin.
  const Fan v = intersect_fans(halfspace_fan(int_vec({0, 1})), h);
  CHECK(v.maximal().size() == 4);
}

TEST_CASE("point location and minimal containing cone") {
  const Fan q = quadrant_fan();
  auto at = locate_point(q, rat_vec({1, 1}));
  REQUIRE(at);
  CHECK(q.cone(*at).dim() == 2);
  at = locate_point(q, rat_vec({1, 0}));
  REQUIRE(at);
  CHECK(q.cone(*at) == Cone::from_generators(vecs({{1, 0}}), 2));
  CHECK(!locate_point(q, rat_vec({-1, 5})));

  CHECK(minimal_containing_cone(q, Cone::from_generators(vecs({{1, 1}}), 2)).dim() == 2);
  CHECK(minimal_containing_cone(q, Cone::from_generators(vecs({{1, 0}}), 2)) ==
        Cone::from_generators(vecs({{1, 0}}), 2));
  CHECK(minimal_containing_cone(q, Cone::origin(2)) == Cone::origin(2));
  CHECK_THROWS_AS(minimal_containing_cone(q, Cone::from_generators(vecs({{-1, 1}}), 2)), Error);
}

TEST_CASE("pairwise intersections in random fans are faces") {
  // Fans built by intersecting half-space fans are fans by construction.
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int t = 0; t < 6; ++t) {
    Fan f = full_space_fan(3);
    for (int k = 0; k < 3; ++k) {
      IntVec g(3);
      do {
        for (int i = 0; i < 3; ++i) g(i) = d(rng);
      } while (is_zero(g));
      f = intersect_fans(f, halfspace_fan(g));
    }
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = i + 1; j < f.size(); ++j) {
        const Cone both = f.cone(i).intersect(f.cone(j));
        CHECK(both.is_face_of(f.cone(i)));
        CHECK(both.is_face_of(f.cone(j)));
      }
  }
}

TEST_CASE("normal vectors") {
  const Cone origin = Cone::origin(2);
  CHECK(normal_vector(origin, Cone::from_generators(vecs({{1, 2}}), 2)) == int_vec({1, 2}));

  const Cone axis = Cone::from_inequalities(int_mat({{0, 1}}), IntMat(0, 2), 2);
  const Cone upper = Cone::from_inequalities(IntMat(0, 2), int_mat({{0, 1}}), 2);
  const Cone lower = Cone::from_inequalities(IntMat(0, 2), int_mat({{0, -1}}), 2);
  CHECK(normal_vector(axis, upper) == int_vec({0, 1}));
  CHECK(normal_vector(axis, lower) == int_vec({0, -1}));

  const Cone tau = Cone::from_generators(vecs({{1, 1}}), 2);
  const Cone sigma = Cone::from_generators(vecs({{1, 1}, {2, 1}}), 2);
  const IntVec u = normal_vector(tau, sigma);
  // Class of (2,1) modulo (1,1): the representative differs by a multiple.
  const IntVec diff = u - int_vec({2, 1});
  CHECK(diff(0) == diff(1));
  IntMat both(2, 2);
  both.row(0) = int_vec({1, 1}).transpose();
  both.row(1) = u.transpose();
  CHECK(lattice_index(both, sigma.span_lattice()) == 1);

  CHECK_THROWS_AS(normal_vector(origin, sigma), Error);
}

TEST_CASE("normal vectors are primitive and point into the cone") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> d(-4, 4);
  int done = 0;
  while (done < 25) {
    const Eigen::Index n = 2 + done % 3;
    std::vector<IntVec> gens;
    for (int k = 0; k < 3 + done % 3; ++k) {
      IntVec v(n);
      for (Eigen::Index j = 0; j < n; ++j) v(j) = d(rng);
      gens.push_back(v);
    }
    const Cone sigma = Cone::from_generators(gens, n);
    if (sigma.dim() < 1) continue;
    for (const auto& tau : sigma.codim_one_faces()) {
      const IntVec u = normal_vector(tau, sigma);
      CHECK(sigma.span_lattice().contains(u));
      // A facet form of sigma tight on tau is positive on u.
      for (Eigen::Index j = 0; j < sigma.facets().rows(); ++j) {
        const IntVec g = sigma.facets().row(j).transpose();
        bool tight = true;
        for (const auto& t : tau.generators())
          if (dot(g, t) != 0) tight = false;
        if (tight) CHECK(dot(g, u) > 0);
      }
      IntMat gensm(tau.span_lattice().rank() + 1, n);
      if (tau.span_lattice().rank() > 0) gensm.topRows(tau.span_lattice().rank()) = tau.span_lattice().basis();
      gensm.row(gensm.rows() - 1) = u.transpose();
      CHECK(lattice_index(gensm, sigma.span_lattice()) == 1);
    }
    ++done;
  }
}
