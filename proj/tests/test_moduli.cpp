#include "doctest.h"

#include "tropfan/errors.hpp"
#include "tropfan/linalg.hpp"
#include "tropfan/moduli.hpp"

#include <bit>
#include <functional>
#include <map>
#include <random>
#include <set>

using namespace tropfan;

namespace {

Split mask(std::initializer_list<int> labels) {
  Split s = 0;
  for (int l : labels) s |= label_bit(l);
  return s;
}

std::vector<Split> all_splits(int n) {
  std::vector<Split> out;
  for (Split s = 1; s < full_mask(n); s += 2) {
    const int k = std::popcount(s);
    if (k >= 2 && k <= n - 2) out.push_back(s);
  }
  return out;
}

// Counts sets of `size` pairwise compatible splits.
std::size_t compatible_sets(int n, std::size_t size) {
  const auto s = all_splits(n);
  std::size_t count = 0;
  std::vector<Split> chosen;
  std::function<void(std::size_t)> go = [&](std::size_t from) {
    if (chosen.size() == size) {
      ++count;
      return;
    }
    for (std::size_t i = from; i < s.size(); ++i) {
      bool ok = true;
      for (auto c : chosen) ok = ok && splits_compatible(c, s[i], n);
      if (!ok) continue;
      chosen.push_back(s[i]);
      go(i + 1);
      chosen.pop_back();
    }
  };
  go(0);
  return count;
}

// Distances between leaves by walking the explicit tree.
std::map<std::pair<int, int>, Rational> path_lengths(const MarkedAbstractCurve& c) {
  const TreeGraph g = tree_graph(c.type);
  std::map<Split, Rational> len;
  for (std::size_t e = 0; e < c.type.splits.size(); ++e) len[c.type.splits[e]] = c.lengths[e];
  std::map<std::pair<int, int>, Rational> out;
  for (int i = 1; i <= c.type.n; ++i) {
    std::vector<Rational> dist(static_cast<std::size_t>(g.vertices), Rational(-1));
    std::vector<int> stack{g.edges[static_cast<std::size_t>(i - 1)].a};
    dist[static_cast<std::size_t>(stack.back())] = 0;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int e : g.incident[static_cast<std::size_t>(v)]) {
        const auto& edge = g.edges[static_cast<std::size_t>(e)];
        if (edge.b < 0) {
          if (edge.label > i) out[{i, edge.label}] = dist[static_cast<std::size_t>(v)];
          continue;
        }
        const int w = edge.a == v ? edge.b : edge.a;
        if (dist[static_cast<std::size_t>(w)] >= 0) continue;
        dist[static_cast<std::size_t>(w)] =
            dist[static_cast<std::size_t>(v)] + len.at(canonical_split(edge.side_b, c.type.n));
        stack.push_back(w);
      }
    }
  }
  return out;
}

MarkedAbstractCurve random_curve(int n, std::mt19937_64& rng) {
  const auto types = enumerate_tree_types(n, true);
  std::uniform_int_distribution<std::size_t> pick(0, types.size() - 1);
  std::uniform_int_distribution<long long> len(1, 40);
  MarkedAbstractCurve c;
  c.type = types[pick(rng)];
  for (std::size_t e = 0; e < c.type.splits.size(); ++e) c.lengths.push_back(Rational(len(rng), 1 + len(rng) % 3));
  return c;
}

// Labels behind edge e seen from vertex v.
Split behind(const TreeGraph& g, int e, int v, int n) {
  const auto& edge = g.edges[static_cast<std::size_t>(e)];
  if (edge.b < 0) return label_bit(edge.label);
  return edge.a == v ? edge.side_b : (full_mask(n) ^ edge.side_b);
}

// Directions by repeatedly peeling vertices with one undetermined edge.
std::map<Split, IntVec> peel_directions(const TreeType& t, int n, const Degree& delta) {
  const TreeGraph g = tree_graph(t);
  // outgoing direction of edge e at its endpoint a (for leaves: the end's direction)
  std::vector<std::optional<IntVec>> out_at_a(g.edges.size());
  for (int k = 1; k <= t.n; ++k)
    out_at_a[static_cast<std::size_t>(k - 1)] =
        k <= n ? IntVec(IntVec::Zero(delta.r)) : delta.entries[static_cast<std::size_t>(k - n - 1)];
  bool progress = true;
  while (progress) {
    progress = false;
    for (int v = 0; v < g.vertices; ++v) {
      int unknown = -1, count = 0;
      IntVec sum = IntVec::Zero(delta.r);
      for (int e : g.incident[static_cast<std::size_t>(v)]) {
        const auto& edge = g.edges[static_cast<std::size_t>(e)];
        const auto& d = out_at_a[static_cast<std::size_t>(e)];
        if (!d) {
          unknown = e;
          ++count;
          continue;
        }
        // direction of e leaving v
        if (edge.b < 0 || edge.a != v) sum += *d;
        else sum -= *d;
      }
      if (count != 1) continue;
      const auto& edge = g.edges[static_cast<std::size_t>(unknown)];
      // edge leaving v has direction -sum
      out_at_a[static_cast<std::size_t>(unknown)] = edge.a == v ? IntVec(sum) : IntVec(-sum);
      progress = true;
    }
  }
  std::map<Split, IntVec> out;
  for (std::size_t e = static_cast<std::size_t>(t.n); e < g.edges.size(); ++e) {
    const auto& edge = g.edges[e];
    REQUIRE(out_at_a[e]);
    // oriented away from label 1: from a to b when label 1 is on a's side
    const bool one_on_b = edge.side_b & 1;
    // out_at_a holds the direction pointing from b into a
    out[canonical_split(edge.side_b, t.n)] = one_on_b ? IntVec(*out_at_a[e]) : IntVec(-*out_at_a[e]);
  }
  return out;
}

bool balanced_everywhere(const TreeType& t, int n, const Degree& delta, const std::vector<IntVec>& dirs) {
  const TreeGraph g = tree_graph(t);
  std::map<Split, IntVec> dir;
  for (std::size_t e = 0; e < t.splits.size(); ++e) dir[t.splits[e]] = dirs[e];
  for (int v = 0; v < g.vertices; ++v) {
    IntVec sum = IntVec::Zero(delta.r);
    for (int e : g.incident[static_cast<std::size_t>(v)]) {
      const auto& edge = g.edges[static_cast<std::size_t>(e)];
      if (edge.b < 0) {
        if (edge.label > n) sum += delta.entries[static_cast<std::size_t>(edge.label - n - 1)];
        continue;
      }
      // leaving v away from label 1 iff label 1 is behind v, i.e. not behind the edge
      const bool away = !(behind(g, e, v, t.n) & 1);
      const IntVec& d = dir.at(canonical_split(edge.side_b, t.n));
      sum += away ? d : IntVec(-d);
    }
    if (!is_zero(sum)) return false;
  }
  return true;
}

Degree line_degree() { return Degree::projective(2, 1); }

}  // namespace

TEST_CASE("tree type counts") {
  CHECK(enumerate_tree_types(3, true).size() == 1);
  CHECK(enumerate_tree_types(4, true).size() == 3);
  CHECK(enumerate_tree_types(5, true).size() == 15);
  CHECK(enumerate_tree_types(5, false).size() == 26);
  for (int n = 4; n <= 7; ++n) {
    const auto t = enumerate_tree_types(n, true);
    CHECK(t.size() == trivalent_type_count(n));
    CHECK(std::set<TreeType>(t.begin(), t.end()).size() == t.size());
  }
  for (int n = 4; n <= 6; ++n) {
    CHECK(enumerate_tree_types(n, true).size() == compatible_sets(n, static_cast<std::size_t>(n - 3)));
    std::size_t all = 0;
    for (int k = 0; k <= n - 3; ++k) all += compatible_sets(n, static_cast<std::size_t>(k));
    CHECK(enumerate_tree_types(n, false).size() == all);
  }
  for (const auto& t : enumerate_tree_types(6, false)) CHECK_NOTHROW(TreeType::make(6, t.splits));
}

TEST_CASE("tree type validation") {
  CHECK_THROWS_AS(TreeType::make(5, {mask({1})}), Error);
  CHECK_THROWS_AS(TreeType::make(5, {mask({1, 2}), mask({1, 3})}), Error);
  CHECK_THROWS_AS(TreeType::make(5, {mask({1, 2}), mask({3, 4, 5})}), Error);
  const TreeType t = TreeType::make(5, {mask({3, 4}), mask({1, 2})});
  CHECK(t.splits == std::vector<Split>{mask({1, 2}), mask({1, 2, 5})});
  CHECK(t.trivalent());
}

TEST_CASE("tree graphs have the right shape") {
  for (const auto& t : enumerate_tree_types(6, false)) {
    const TreeGraph g = tree_graph(t);
    CHECK(g.vertices == static_cast<int>(t.splits.size()) + 1);
    for (const auto& inc : g.incident) CHECK(inc.size() >= 3);
  }
}

TEST_CASE("distance vectors") {
  const QnSpace q(4);
  MarkedAbstractCurve c{TreeType::make(4, {mask({1, 2})}), {Rational(1)}};
  const RatVec d = dist_vector(c);
  CHECK(d(q.pair_index(1, 2)) == 0);
  CHECK(d(q.pair_index(3, 4)) == 0);
  CHECK(d(q.pair_index(1, 3)) == 1);
  CHECK(d(q.pair_index(2, 4)) == 1);
  CHECK(is_zero(dist_vector({TreeType::make(5, {}), {}})));
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const auto curve = random_curve(4 + t % 4, rng);
    const RatVec x = dist_vector(curve);
    const QnSpace qn(curve.type.n);
    for (const auto& [ij, len] : path_lengths(curve)) CHECK(x(qn.pair_index(ij.first, ij.second)) == len);
  }
}

TEST_CASE("the vectors v_I") {
  const QnSpace q5(5);
  CHECK(v_I(5, mask({1, 2, 5})) == v_I(5, mask({3, 4})));
  CHECK(q5.ray(mask({1, 2, 5})) == q5.ray(mask({3, 4})));
  CHECK_THROWS_AS(v_I(5, mask({1})), Error);
  const RatMat phi4 = to_rational(QnSpace(4).phi());
  const RatVec sum = v_I(4, mask({1, 2})) + v_I(4, mask({1, 3})) + v_I(4, mask({1, 4}));
  CHECK(solve_affine(phi4, sum));
  CHECK_FALSE(solve_affine(phi4, v_I(4, mask({1, 2}))));
}

TEST_CASE("Q_n charts") {
  for (int n = 3; n <= 8; ++n) {
    const QnSpace q(n);
    CHECK(q.dim() == n * (n - 1) / 2 - n);
    CHECK((q.projection() * to_rational(q.phi())).isZero());
    CHECK(q.projection() * q.lift() == RatMat::Identity(q.dim(), q.dim()));
    std::vector<IntVec> rays;
    for (auto s : all_splits(n)) rays.push_back(q.ray(s));
    if (q.dim() > 0) CHECK(Lattice(q.dim(), rows_to_matrix(rays, q.dim())) == Lattice::standard(q.dim()));
  }
}

TEST_CASE("moduli fans") {
  for (int n = 4; n <= 6; ++n) {
    const ModuliFan m = build_m0n(n);
    const Fan& f = m.fan.fan();
    CHECK(f.dim() == n - 3);
    CHECK(f.is_pure());
    CHECK(f.is_simplicial());
    CHECK(f.of_dim(1).size() == (std::size_t{1} << (n - 1)) - static_cast<std::size_t>(n) - 1);
    CHECK(f.maximal().size() == trivalent_type_count(n));
    CHECK(is_balanced_marked(m.fan));
    for (const auto& t : enumerate_tree_types(n, false)) CHECK(f.cone(m.cone_of(t)).dim() == static_cast<Eigen::Index>(t.splits.size()));
  }
  CHECK(build_m0n(5).fan.fan().of_dim(1).size() == 10);
  CHECK(build_m0n(3).fan.fan().size() == 1);
  ModuliOptions small;
  small.max_cones = 100;
  CHECK_THROWS_AS(build_m0n(7, small), Error);
}

TEST_CASE("moduli cones embed") {
  for (int n = 4; n <= 7; ++n) {
    const QnSpace q(n);
    for (const auto& t : enumerate_tree_types(n, true)) {
      std::vector<IntVec> rays;
      for (auto s : t.splits) rays.push_back(q.ray(s));
      CHECK(rank(rows_to_matrix(rays, q.dim())) == n - 3);
    }
  }
}

TEST_CASE("M_0,4 is the tropical line") {
  const ModuliFan m = build_m0n(4);
  const IntVec a = m.space.ray(mask({1, 2})), b = m.space.ray(mask({1, 3}));
  IntMat basis(2, 2);
  basis.col(0) = a;
  basis.col(1) = b;
  CHECK(abs(determinant(basis)) == 1);
  const IntMat change = to_integer(inverse(to_rational(basis)));
  std::vector<Cone> mapped;
  for (const auto& c : m.fan.fan().cones()) mapped.push_back(c.image(change));
  const Fan image = Fan::from_cones(mapped, 2);
  const Fan line = standard_L(1, 2);
  REQUIRE(image.size() == line.size());
  for (std::size_t i = 0; i < image.size(); ++i) CHECK(image.cone(i) == line.cone(i));
}

TEST_CASE("balancing identity at codimension one cones") {
  for (int n = 5; n <= 6; ++n) {
    const QnSpace q(n);
    const RatMat phi = to_rational(q.phi());
    for (const auto& tau : enumerate_tree_types(n, false)) {
      if (static_cast<int>(tau.splits.size()) != n - 4) continue;
      const TreeGraph g = tree_graph(tau);
      int v = -1;
      for (int u = 0; u < g.vertices; ++u)
        if (g.incident[static_cast<std::size_t>(u)].size() == 4) v = u;
      REQUIRE(v >= 0);
      const auto& inc = g.incident[static_cast<std::size_t>(v)];
      std::vector<Split> parts;
      RatVec a = RatVec::Zero(n), dist = RatVec::Zero(q.pair_count());
      for (int e : inc) {
        parts.push_back(behind(g, e, v, n));
        const auto& edge = g.edges[static_cast<std::size_t>(e)];
        if (edge.b < 0) a(edge.label - 1) = 1;
        else dist += v_I(n, edge.side_b);
      }
      const RatVec lhs = v_I(n, parts[0] | parts[1]) + v_I(n, parts[0] | parts[2]) + v_I(n, parts[0] | parts[3]);
      CHECK(lhs == RatVec(phi * a + dist));
    }
  }
}

TEST_CASE("forgetful maps") {
  const QnSpace q5(5), q4(4), q6(6);
  const IntMat f = forgetful_matrix(q5, q4);
  CHECK(is_zero(IntVec(f * q5.ray(mask({1, 5})))));
  CHECK(f * q5.ray(mask({1, 2, 5})) == q4.ray(mask({1, 2})));
  const IntMat g = forgetful_matrix(q6, q5);
  CHECK(g * q6.ray(mask({3, 4, 6})) == q5.ray(mask({3, 4})));
  std::mt19937_64 rng(8);
  for (int t = 0; t < 40; ++t) {
    const int n = 5 + t % 3;
    const QnSpace from(n), to(n - 1);
    const auto c = random_curve(n, rng);
    const RatVec lhs = to_rational(forgetful_matrix(from, to)) * from.to_lattice(dist_vector(c));
    CHECK(lhs == to.to_lattice(dist_vector(forget_last(c))));
  }
  const ModuliFan m5 = build_m0n(5), m4 = build_m0n(4), m6 = build_m0n(6);
  CHECK_NOTHROW(forgetful_morphism(m5, m4));
  CHECK_NOTHROW(forgetful_morphism(m6, m5));
}

TEST_CASE("curves at points of the moduli fan") {
  const ModuliFan m = build_m0n(6);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto c = random_curve(6, rng);
    const auto back = curve_at(m, m.space.to_lattice(dist_vector(c)));
    CHECK(back.type == c.type);
    CHECK(back.lengths == c.lengths);
  }
}

TEST_CASE("degrees") {
  CHECK(Degree::projective(2, 1).entries ==
        std::vector<IntVec>{int_vec({1, 1}), int_vec({-1, 0}), int_vec({0, -1})});
  CHECK(Degree::projective(3, 2).size() == 8);
  CHECK_THROWS_AS(Degree::make(2, {int_vec({1, 0}), int_vec({0, 1})}), Error);
  CHECK_THROWS_AS(Degree::make(2, {int_vec({0, 0})}), Error);
}

TEST_CASE("edge directions") {
  // ends x1, x4 at one vertex, x3 in the middle, x2, x5 at the other
  const Degree d = line_degree();
  const TreeType t = TreeType::make(5, {mask({1, 4}), mask({2, 5})});
  const auto dirs = directions(t, 2, d);
  CHECK(dirs[0] == int_vec({1, 0}));
  CHECK(dirs[1] == int_vec({0, -1}));
  CHECK(directions(TreeType::make(3, {}), 0, d).empty());

  const std::vector<std::pair<int, Degree>> configs{
      {2, d}, {3, d}, {1, Degree::projective(2, 2)}, {1, Degree::projective(3, 1)}};
  for (const auto& [n, delta] : configs) {
    const int big_n = n + static_cast<int>(delta.size());
    if (big_n > 8) continue;
    for (const auto& type : enumerate_tree_types(big_n, false)) {
      const auto dv = directions(type, n, delta);
      CHECK(balanced_everywhere(type, n, delta, dv));
      const auto peeled = peel_directions(type, n, delta);
      for (std::size_t e = 0; e < type.splits.size(); ++e) CHECK(peeled.at(type.splits[e]) == dv[e]);
      for (std::size_t e = 0; e < dv.size(); ++e) {
        auto bent = dv;
        bent[e] += IntVec::Unit(delta.r, 0);
        CHECK_FALSE(balanced_everywhere(type, n, delta, bent));
      }
    }
  }
}

TEST_CASE("stable map fans") {
  const StableMapsFan s = stable_maps_fan(2, line_degree());
  CHECK(s.fan.dim() == 4);
  CHECK(s.fan.ambient_rank() == 5 + 2);
  CHECK(is_balanced(s.fan));
  CHECK_THROWS_AS(stable_maps_fan(0, line_degree()), Error);
  // r + N - 3 for n = 8 contracted ends and four ends in R^3
  ModuliOptions tiny;
  tiny.max_cones = 1000;
  CHECK_THROWS_AS(stable_maps_fan(8, Degree::projective(3, 1), tiny), Error);
}

TEST_CASE("evaluation maps agree with path sums") {
  const Degree d = line_degree();
  {
    const QnSpace q(5);
    const IntMat ev1 = ev_matrix(q, 1, 2, d);
    CHECK(ev1.leftCols(q.dim()).isZero());
    CHECK(ev1.rightCols(2) == IntMat::Identity(2, 2));
    MarkedAbstractCurve c{TreeType::make(5, {mask({1, 4}), mask({2, 5})}), {Rational(3), Rational(7)}};
    const RatVec root = rat_vec({10, 20});
    CHECK(evaluate(c, root, 2, 2, d) == RatVec(root + 3 * rat_vec({1, 0}) + 7 * rat_vec({0, -1})));
    RatVec x(q.dim() + 2);
    x << q.to_lattice(dist_vector(c)), root;
    CHECK(RatVec(to_rational(ev_matrix(q, 2, 2, d)) * x) == evaluate(c, root, 2, 2, d));
  }
  std::mt19937_64 rng(17);
  const std::vector<std::pair<int, Degree>> configs{{2, d}, {3, d}, {4, d}, {1, Degree::projective(3, 1)}};
  for (const auto& [n, delta] : configs) {
    const int big_n = n + static_cast<int>(delta.size());
    const QnSpace q(big_n);
    std::vector<IntMat> ev;
    for (int i = 1; i <= n; ++i) ev.push_back(ev_matrix(q, i, n, delta));
    std::uniform_int_distribution<long long> coord(-50, 50);
    for (int t = 0; t < 100; ++t) {
      const auto c = random_curve(big_n, rng);
      RatVec root(delta.r);
      for (Eigen::Index k = 0; k < delta.r; ++k) root(k) = coord(rng);
      RatVec x(q.dim() + delta.r);
      x << q.to_lattice(dist_vector(c)), root;
      for (int i = 1; i <= n; ++i)
        CHECK(RatVec(to_rational(ev[static_cast<std::size_t>(i - 1)]) * x) == evaluate(c, root, i, n, delta));
    }
    // generators v_I with label 1 in I
    for (auto s : all_splits(big_n)) {
      const IntVec ray = q.ray(s);
      for (int i = 1; i <= n; ++i) {
        IntVec x(q.dim() + delta.r);
        x << ray, IntVec::Zero(delta.r);
        IntVec expect = IntVec::Zero(delta.r);
        if (!(s & label_bit(i)))
          for (int k = n + 1; k <= big_n; ++k)
            if (s & label_bit(k)) expect -= delta.entries[static_cast<std::size_t>(k - n - 1)];
        CHECK(IntVec(ev[static_cast<std::size_t>(i - 1)] * x) == expect);
      }
    }
  }
  const StableMapsFan s = stable_maps_fan(2, d);
  CHECK_NOTHROW(ev_morphism(s, 2));
}

TEST_CASE("forgetting down to four marked ends") {
  const Degree d = line_degree();
  const QnSpace q(7), q4(4);
  const IntMat f = ft4_matrix(q, q4, 2);
  auto apply = [&](Split s) {
    IntVec x(q.dim() + 2);
    x << q.ray(s), IntVec::Zero(2);
    return IntVec(f * x);
  };
  CHECK(apply(mask({1, 2})) == q4.ray(mask({1, 2})));
  CHECK(apply(mask({1, 2, 5, 7})) == q4.ray(mask({1, 2})));
  CHECK(apply(mask({1, 3, 6})) == q4.ray(mask({1, 3})));
  CHECK(is_zero(apply(mask({1, 2, 3, 4}))));
  CHECK(is_zero(apply(mask({1, 2, 3}))));
  CHECK(f.rightCols(2).isZero());
  const StableMapsFan s = stable_maps_fan(4, d);
  const ModuliFan m4 = build_m0n(4);
  CHECK_NOTHROW(ft4_morphism(s, m4));
}
