#include "doctest.h"

#include "tropfan/errors.hpp"
#include "tropfan/lattice.hpp"
#include "tropfan/linalg.hpp"
#include "tropfan/normal_form.hpp"

#include <random>

using namespace tropfan;

namespace {

IntMat random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  IntMat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

bool is_row_hnf(const IntMat& h, const std::vector<Eigen::Index>& pivots) {
  Eigen::Index prev = -1;
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const Eigen::Index p = pivots[i];
    if (p <= prev) return false;
    for (Eigen::Index j = 0; j < p; ++j)
      if (h(r, j) != 0) return false;
    if (h(r, p) <= 0) return false;
    for (Eigen::Index k = 0; k < r; ++k)
      if (h(k, p) < 0 || h(k, p) >= h(r, p)) return false;
    for (Eigen::Index k = r + 1; k < h.rows(); ++k)
      if (h(k, p) != 0) return false;
    prev = p;
  }
  for (auto r = static_cast<Eigen::Index>(pivots.size()); r < h.rows(); ++r)
    if (!h.row(r).isZero()) return false;
  return true;
}

// Number of integer points in the half-open parallelepiped spanned by the
// rows of a square full-rank basis: equals the index of the sublattice.
long long count_fundamental_domain(const IntMat& b) {
  const Eigen::Index n = b.rows();
  std::vector<long long> lo(n, 0), hi(n, 0);
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const long long v = b(i, j).convert_to<long long>();
      if (v < 0) lo[j] += v; else hi[j] += v;
    }
  const RatMat inv_t = to_rational(b).transpose().inverse();
  long long count = 0;
  std::vector<long long> x(lo);
  while (true) {
    RatVec p(n);
    for (Eigen::Index j = 0; j < n; ++j) p(j) = x[j];
    const RatVec c = inv_t * p;
    bool inside = true;
    for (Eigen::Index j = 0; j < n; ++j)
      if (c(j) < 0 || c(j) >= 1) inside = false;
    if (inside) ++count;
    Eigen::Index k = 0;
    while (k < n && ++x[k] > hi[k]) {
      x[k] = lo[k];
      ++k;
    }
    if (k == n) break;
  }
  return count;
}

}  // namespace

TEST_CASE("hermite normal form") {
  const IntMat id = IntMat::Identity(2, 2);
  auto h = hermite_normal_form<Integer>(id);
  CHECK(h.h == id);
  CHECK(h.u == id);

  h = hermite_normal_form<Integer>(int_mat({{2, 4}}));
  CHECK(h.h == int_mat({{2, 4}}));
  CHECK(h.u == int_mat({{1}}));

  const IntMat m = int_mat({{2, 0}, {0, 3}, {1, 1}});
  h = hermite_normal_form<Integer>(m);
  CHECK(h.u * m == h.h);
  CHECK(abs(determinant(h.u)) == 1);
  CHECK(is_row_hnf(h.h, h.pivot_cols));
  const Lattice l(2, m);
  for (Eigen::Index i = 0; i < m.rows(); ++i) CHECK(l.contains(IntVec(m.row(i).transpose())));
}

TEST_CASE("hermite normal form on machine integers") {
  Mat<long long> m(2, 3);
  m << 4, 6, 2, 2, 3, 5;
  const auto h = hermite_normal_form<long long>(m);
  CHECK(h.u * m == h.h);
  CHECK(h.rank() == 2);
}

TEST_CASE("hermite and smith forms reassemble on random input") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index r = 1 + trial % 5, c = 1 + (trial / 5) % 5;
    const IntMat m = random_matrix(rng, r, c, trial % 3 == 0 ? 1 : 9);
    const auto h = hermite_normal_form<Integer>(m);
    CHECK(h.u * m == h.h);
    CHECK(abs(determinant(h.u)) == 1);
    CHECK(is_row_hnf(h.h, h.pivot_cols));
    CHECK(h.rank() == rank(m));

    const auto s = smith_normal_form<Integer>(m);
    CHECK(s.u * m * s.v == s.s);
    CHECK(abs(determinant(s.u)) == 1);
    CHECK(abs(determinant(s.v)) == 1);
    const auto d = s.diagonal();
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      CHECK(d[i] >= 0);
      if (d[i] == 0) CHECK(d[i + 1] == 0);
      else CHECK(d[i + 1] % d[i] == 0);
    }
    for (Eigen::Index i = 0; i < s.s.rows(); ++i)
      for (Eigen::Index j = 0; j < s.s.cols(); ++j)
        if (i != j) CHECK(s.s(i, j) == 0);
  }
}

TEST_CASE("smith normal form") {
  CHECK(smith_normal_form<Integer>(IntMat::Identity(3, 3)).s == IntMat::Identity(3, 3));
  const auto s = smith_normal_form<Integer>(int_mat({{2, 0}, {0, 3}}));
  CHECK(s.diagonal() == std::vector<Integer>{1, 6});

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const IntMat m = random_matrix(rng, 4, 4, 6);
    const Rational det = determinant(to_rational(m));
    Integer prod = 1;
    for (const auto& d : smith_normal_form<Integer>(m).diagonal()) prod *= d;
    CHECK(Rational(prod) == abs(det));
  }
}

TEST_CASE("lattice index") {
  const Lattice z2 = Lattice::standard(2);
  CHECK(lattice_index(int_mat({{2, 0}, {0, 3}}), z2) == 6);
  CHECK(lattice_index(z2.basis(), z2) == 1);
  const IntMat sub = int_mat({{1, 1}, {1, -1}});
  CHECK(lattice_index(sub, z2) == 2);
  CHECK(count_fundamental_domain(sub) == 2);
  CHECK_THROWS_AS(lattice_index(int_mat({{1, 1}}), z2), Error);
  try {
    lattice_index(int_mat({{1, 1}}), z2);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotFullRank);
  }
}

TEST_CASE("lattice index agrees with fundamental domain count") {
  std::mt19937_64 rng(3);
  int checked = 0;
  while (checked < 15) {
    const IntMat b = random_matrix(rng, 2 + checked % 2, 2 + checked % 2, 3);
    if (rank(b) < b.rows()) continue;
    const Integer idx = lattice_index(b, Lattice::standard(b.cols()));
    CHECK(idx == count_fundamental_domain(b));
    ++checked;
  }
}

TEST_CASE("lattice index is multiplicative along chains") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    IntMat a = random_matrix(rng, 3, 3, 4);
    IntMat c = random_matrix(rng, 3, 3, 3);
    if (rank(a) < 3 || rank(c) < 3) continue;
    // B = c * a  is contained in L = rowspan(a), which is contained in Z^3.
    const IntMat b = c * a;
    const Lattice l(3, a);
    const Lattice m = Lattice::standard(3);
    CHECK(lattice_index(b, l) * lattice_index(l.basis(), m) == lattice_index(b, m));
  }
}

TEST_CASE("saturation") {
  CHECK(saturate(int_mat({{2, 4}})).basis() == int_mat({{1, 2}}));
  CHECK(saturate(int_mat({{1, 0}, {0, 1}})) == Lattice::standard(2));
  const Lattice s = saturate(int_mat({{2, 0}, {0, 2}, {1, 1}}));
  CHECK(s == Lattice::standard(2));
  CHECK(lattice_index(s.basis(), Lattice::standard(2)) == 1);
  CHECK(saturate(IntMat(0, 3)).rank() == 0);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const IntMat g = random_matrix(rng, 2, 4, 5);
    const Lattice sat = saturate(g);
    CHECK(saturate(sat.basis()) == sat);
    if (rank(g) == 2) {
      const Integer full = lattice_index(g, sat);
      CHECK(full >= 1);
      for (Eigen::Index i = 0; i < g.rows(); ++i) CHECK(sat.contains(IntVec(g.row(i).transpose())));
    }
  }
}

TEST_CASE("primitive generator") {
  CHECK(primitive_generator(int_vec({2, 4})) == int_vec({1, 2}));
  RatVec q(2);
  q << Rational(1, 2), Rational(1, 3);
  CHECK(primitive_generator(q) == int_vec({3, 2}));
  CHECK(primitive_generator(int_vec({-3, 0, 6})) == int_vec({-1, 0, 2}));
  CHECK_THROWS_AS(primitive_generator(int_vec({0, 0})), Error);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const IntVec v = random_matrix(rng, 3, 1, 7).col(0);
    if (is_zero(v)) continue;
    const Rational lambda(1 + t % 5, 1 + t % 7);
    CHECK(primitive_generator(RatVec(to_rational(v) * lambda)) == primitive_generator(v));
  }
}

TEST_CASE("solve affine") {
  const RatVec b = rat_vec({3, -1});
  auto s = solve_affine(RatMat::Identity(2, 2), b);
  REQUIRE(s);
  CHECK(s->particular == b);
  CHECK(s->kernel.empty());

  s = solve_affine(RatMat::Zero(1, 2), rat_vec({0}));
  REQUIRE(s);
  CHECK(s->kernel.size() == 2);
  CHECK(!solve_affine(RatMat::Zero(1, 2), rat_vec({1})));

  const RatMat a = to_rational(int_mat({{1, 1}}));
  s = solve_affine(a, rat_vec({2}));
  REQUIRE(s);
  CHECK(a * s->particular == rat_vec({2}));
  REQUIRE(s->kernel.size() == 1);
  CHECK(is_zero(RatVec(a * s->kernel[0])));
}

TEST_CASE("integer kernel is saturated") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    const IntMat m = random_matrix(rng, 2, 5, 6);
    const IntMat k = integer_kernel(m);
    CHECK(k.rows() == 5 - rank(m));
    CHECK((m * k.transpose()).isZero());
    CHECK(saturate(k) == Lattice(5, k));
  }
}
