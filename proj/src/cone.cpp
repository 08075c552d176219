#include "tropfan/cone.hpp"

#include "tropfan/errors.hpp"
#include "tropfan/linalg.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <map>
#include <sstream>

namespace tropfan {

namespace {

struct DdRay {
  IntVec v;
  boost::dynamic_bitset<> tight;
};

void sort_unique(std::vector<IntVec>& vs) {
  std::sort(vs.begin(), vs.end(),
            [](const IntVec& a, const IntVec& b) { return lex_compare(a, b) < 0; });
  vs.erase(std::unique(vs.begin(), vs.end(),
                       [](const IntVec& a, const IntVec& b) { return lex_compare(a, b) == 0; }),
           vs.end());
}

IntMat stack(const std::vector<IntVec>& rows, Eigen::Index cols) { return rows_to_matrix(rows, cols); }

IntMat vcat(const IntMat& a, const IntMat& b) {
  IntMat out(a.rows() + b.rows(), a.cols());
  if (a.rows()) out.topRows(a.rows()) = a;
  if (b.rows()) out.bottomRows(b.rows()) = b;
  return out;
}

}  // namespace

IntVec project_out(const IntMat& rows, const IntVec& v) {
  if (rows.rows() == 0) return make_primitive(v);
  const RatMat b = to_rational(rows);
  const RatMat gram = b * b.transpose();
  const RatVec rhs = b * to_rational(v);
  auto sol = solve_affine(gram, rhs);
  const RatVec p = to_rational(v) - b.transpose() * sol->particular;
  if (is_zero(p)) return IntVec::Zero(v.size());
  return make_primitive(clear_denominators(p));
}

ConeGenerators double_description(const IntMat& equalities, const IntMat& inequalities,
                                  Eigen::Index ambient_rank) {
  const Eigen::Index n = ambient_rank;
  std::vector<IntVec> lin;
  if (equalities.rows() == 0) {
    for (Eigen::Index i = 0; i < n; ++i) {
      IntVec e = IntVec::Zero(n);
      e(i) = 1;
      lin.push_back(e);
    }
  } else {
    lin = matrix_to_rows(integer_kernel(equalities));
  }
  const auto m = static_cast<std::size_t>(inequalities.rows());
  std::vector<DdRay> rays;

  for (std::size_t k = 0; k < m; ++k) {
    const IntVec a = inequalities.row(static_cast<Eigen::Index>(k)).transpose();

    // Case 1: the inequality cuts the lineality space.
    std::ptrdiff_t pick = -1;
    Integer best = 0;
    for (std::size_t j = 0; j < lin.size(); ++j) {
      const Integer s = dot(a, lin[j]);
      if (s != 0 && (pick < 0 || abs(s) < best)) {
        pick = static_cast<std::ptrdiff_t>(j);
        best = abs(s);
      }
    }
    if (pick >= 0) {
      IntVec l0 = lin[static_cast<std::size_t>(pick)];
      Integer s0 = dot(a, l0);
      if (s0 < 0) {
        l0 = -l0;
        s0 = -s0;
      }
      lin.erase(lin.begin() + pick);
      for (auto& l : lin) {
        const Integer s = dot(a, l);
        if (s != 0) l = make_primitive(IntVec(s0 * l - s * l0));
      }
      for (auto& r : rays) {
        const Integer s = dot(a, r.v);
        if (s != 0) r.v = make_primitive(IntVec(s0 * r.v - s * l0));
        r.tight.set(k);
      }
      DdRay fresh{l0, boost::dynamic_bitset<>(m)};
      for (std::size_t i = 0; i < k; ++i) fresh.tight.set(i);
      rays.push_back(std::move(fresh));
      continue;
    }

    // Case 2: ordinary double description step.
    std::vector<Integer> val(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<DdRay> next;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(a, rays[i].v);
      if (val[i] > 0) {
        pos.push_back(i);
        next.push_back(rays[i]);
      } else if (val[i] < 0) {
        neg.push_back(i);
      } else {
        next.push_back(rays[i]);
        next.back().tight.set(k);
      }
    }
    for (std::size_t p : pos)
      for (std::size_t q : neg) {
        const auto common = rays[p].tight & rays[q].tight;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          if (common.is_subset_of(rays[r].tight)) adjacent = false;
        }
        if (!adjacent) continue;
        DdRay w{make_primitive(IntVec(val[p] * rays[q].v - val[q] * rays[p].v)), common};
        w.tight.set(k);
        next.push_back(std::move(w));
      }
    rays = std::move(next);
  }

  ConeGenerators out;
  out.lineality = stack(lin, n);
  std::vector<IntVec> rv;
  for (auto& r : rays) rv.push_back(r.v);
  out.rays = stack(rv, n);
  return out;
}

std::string Cone::make_key(Eigen::Index ambient_rank, const IntMat& lineality,
                           const std::vector<IntVec>& sorted_rays) {
  std::ostringstream os;
  os << ambient_rank << "|L";
  for (Eigen::Index i = 0; i < lineality.rows(); ++i) {
    for (Eigen::Index j = 0; j < lineality.cols(); ++j) os << (j ? "," : "") << lineality(i, j);
    os << ';';
  }
  os << "|R";
  for (const auto& r : sorted_rays) {
    for (Eigen::Index j = 0; j < r.size(); ++j) os << (j ? "," : "") << r(j);
    os << ';';
  }
  return os.str();
}

void Cone::finalize(const ConeGenerators& v, const ConeGenerators& dual) {
  const Eigen::Index n = ambient_;
  lineality_ = saturate(v.lineality).basis();
  std::vector<IntVec> rays;
  for (Eigen::Index i = 0; i < v.rays.rows(); ++i) {
    IntVec r = project_out(lineality_, v.rays.row(i).transpose());
    if (!is_zero(r)) rays.push_back(r);
  }
  sort_unique(rays);
  rays_ = stack(rays, n);

  const IntMat gens = vcat(rays_, lineality_);
  equalities_ = Lattice(n, integer_kernel(gens)).basis();
  dim_ = n - equalities_.rows();
  std::vector<IntVec> facets;
  for (Eigen::Index i = 0; i < dual.rays.rows(); ++i) {
    IntVec f = project_out(equalities_, dual.rays.row(i).transpose());
    if (!is_zero(f)) facets.push_back(f);
  }
  sort_unique(facets);
  facets_ = stack(facets, n);
  span_lattice_ = Lattice(n, integer_kernel(equalities_));
  key_ = make_key(n, lineality_, rays);
}

Cone Cone::from_generators(const IntMat& generator_rows) {
  Cone c;
  c.ambient_ = generator_rows.cols();
  const ConeGenerators dual =
      double_description(IntMat(0, c.ambient_), generator_rows, c.ambient_);
  const ConeGenerators primal = double_description(dual.lineality, dual.rays, c.ambient_);
  c.finalize(primal, dual);
  return c;
}

Cone Cone::from_generators(const std::vector<IntVec>& generators, Eigen::Index ambient_rank) {
  return from_generators(rows_to_matrix(generators, ambient_rank));
}

Cone Cone::from_inequalities(const IntMat& equalities, const IntMat& inequalities,
                             Eigen::Index ambient_rank) {
  Cone c;
  c.ambient_ = ambient_rank;
  const IntMat eq = equalities.rows() ? equalities : IntMat(0, ambient_rank);
  const IntMat ineq = inequalities.rows() ? inequalities : IntMat(0, ambient_rank);
  const ConeGenerators primal = double_description(eq, ineq, ambient_rank);
  const IntMat gens = vcat(vcat(primal.rays, primal.lineality), IntMat(-primal.lineality));
  const ConeGenerators dual = double_description(IntMat(0, ambient_rank), gens, ambient_rank);
  c.finalize(primal, dual);
  return c;
}

Cone Cone::simplicial(const std::vector<IntVec>& rays, Eigen::Index ambient_rank) {
  return simplicial(rays, {}, ambient_rank);
}

Cone Cone::simplicial(const std::vector<IntVec>& rays, const std::vector<IntVec>& lineality,
                      Eigen::Index ambient_rank) {
  Cone c;
  c.ambient_ = ambient_rank;
  c.lineality_ = lineality.empty() ? IntMat(0, ambient_rank)
                                   : saturate(stack(lineality, ambient_rank)).basis();
  std::vector<IntVec> prim;
  for (const auto& r : rays) {
    IntVec p = c.lineality_.rows() ? project_out(c.lineality_, r) : primitive_generator(r);
    if (is_zero(p)) throw Error(Errc::Precondition, "simplicial cone ray lies in the lineality space");
    prim.push_back(std::move(p));
  }
  sort_unique(prim);
  const IntMat r = stack(prim, ambient_rank);
  const IntMat gens = vcat(r, c.lineality_);
  if (rank(gens) != gens.rows()) throw Error(Errc::Precondition, "simplicial cone rays are dependent");
  c.rays_ = r;
  c.dim_ = gens.rows();
  c.equalities_ = Lattice(ambient_rank, integer_kernel(gens)).basis();
  // Facet i is the form in the span dual to ray i, vanishing on the rest.
  const RatMat gq = to_rational(gens);
  const RatMat gram = gq * gq.transpose();
  const RatMat dual = gq.transpose() * inverse(gram);
  std::vector<IntVec> facets;
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    facets.push_back(make_primitive(clear_denominators(RatVec(dual.col(i)))));
  sort_unique(facets);
  c.facets_ = stack(facets, ambient_rank);
  c.span_lattice_ = Lattice(ambient_rank, integer_kernel(c.equalities_));
  c.key_ = make_key(ambient_rank, c.lineality_, prim);
  return c;
}

Cone Cone::origin(Eigen::Index ambient_rank) {
  return from_generators(IntMat(0, ambient_rank));
}

Cone Cone::full_space(Eigen::Index ambient_rank) {
  return from_inequalities(IntMat(0, ambient_rank), IntMat(0, ambient_rank), ambient_rank);
}

std::vector<IntVec> Cone::generators() const {
  std::vector<IntVec> g = matrix_to_rows(rays_);
  for (Eigen::Index i = 0; i < lineality_.rows(); ++i) {
    g.emplace_back(lineality_.row(i).transpose());
    g.emplace_back(-lineality_.row(i).transpose());
  }
  sort_unique(g);
  return g;
}

bool Cone::contains(const RatVec& p) const {
  for (Eigen::Index i = 0; i < equalities_.rows(); ++i)
    if (dot(to_rational(IntVec(equalities_.row(i).transpose())), p) != 0) return false;
  for (Eigen::Index i = 0; i < facets_.rows(); ++i)
    if (dot(to_rational(IntVec(facets_.row(i).transpose())), p) < 0) return false;
  return true;
}

bool Cone::contains(const IntVec& p) const {
  for (Eigen::Index i = 0; i < equalities_.rows(); ++i)
    if (dot(IntVec(equalities_.row(i).transpose()), p) != 0) return false;
  for (Eigen::Index i = 0; i < facets_.rows(); ++i)
    if (dot(IntVec(facets_.row(i).transpose()), p) < 0) return false;
  return true;
}

bool Cone::contains(const Cone& other) const {
  for (const auto& g : other.generators())
    if (!contains(g)) return false;
  return true;
}

bool Cone::contains_in_relative_interior(const RatVec& p) const {
  for (Eigen::Index i = 0; i < equalities_.rows(); ++i)
    if (dot(to_rational(IntVec(equalities_.row(i).transpose())), p) != 0) return false;
  for (Eigen::Index i = 0; i < facets_.rows(); ++i)
    if (dot(to_rational(IntVec(facets_.row(i).transpose())), p) <= 0) return false;
  return true;
}

bool Cone::is_face_of(const Cone& sigma) const {
  if (!sigma.contains(*this)) return false;
  const auto gens = generators();
  std::vector<Eigen::Index> tight;
  for (Eigen::Index j = 0; j < sigma.facets_.rows(); ++j) {
    const IntVec f = sigma.facets_.row(j).transpose();
    bool all_zero = true;
    for (const auto& g : gens)
      if (dot(f, g) != 0) {
        all_zero = false;
        break;
      }
    if (all_zero) tight.push_back(j);
  }
  // The smallest face of sigma containing this cone; equality of point sets
  // follows from containment of its generators.
  for (Eigen::Index i = 0; i < sigma.rays_.rows(); ++i) {
    const IntVec r = sigma.rays_.row(i).transpose();
    bool on_face = true;
    for (auto j : tight)
      if (dot(IntVec(sigma.facets_.row(j).transpose()), r) != 0) {
        on_face = false;
        break;
      }
    if (on_face && !contains(r)) return false;
  }
  for (Eigen::Index i = 0; i < sigma.lineality_.rows(); ++i)
    if (!contains(IntVec(sigma.lineality_.row(i).transpose()))) return false;
  return true;
}

Cone Cone::intersect(const Cone& other) const {
  return from_inequalities(vcat(equalities_, other.equalities_), vcat(facets_, other.facets_),
                           ambient_);
}

Cone Cone::product(const Cone& other) const {
  // Canonical parts of a product are the block-diagonal stacks of the parts.
  const Eigen::Index n = ambient_ + other.ambient_;
  auto blocks = [&](const IntMat& x, const IntMat& y) {
    IntMat m = IntMat::Zero(x.rows() + y.rows(), n);
    m.topLeftCorner(x.rows(), ambient_) = x;
    m.bottomRightCorner(y.rows(), other.ambient_) = y;
    return m;
  };
  auto sorted_rows = [](const IntMat& m) {
    auto rows = matrix_to_rows(m);
    sort_unique(rows);
    return rows;
  };
  Cone c;
  c.ambient_ = n;
  c.dim_ = dim_ + other.dim_;
  c.lineality_ = blocks(lineality_, other.lineality_);
  const auto rays = sorted_rows(blocks(rays_, other.rays_));
  c.rays_ = stack(rays, n);
  c.equalities_ = blocks(equalities_, other.equalities_);
  c.facets_ = stack(sorted_rows(blocks(facets_, other.facets_)), n);
  c.span_lattice_ = Lattice(n, blocks(span_lattice_.basis(), other.span_lattice_.basis()));
  c.key_ = make_key(n, c.lineality_, rays);
  return c;
}

Cone Cone::image(const IntMat& matrix) const {
  std::vector<IntVec> gens;
  for (const auto& g : generators()) gens.emplace_back(matrix * g);
  return from_generators(gens, matrix.rows());
}

Cone Cone::face_on(const std::vector<Eigen::Index>& facet_indices) const {
  std::vector<IntVec> gens;
  for (Eigen::Index i = 0; i < rays_.rows(); ++i) {
    const IntVec r = rays_.row(i).transpose();
    bool on = true;
    for (auto j : facet_indices)
      if (dot(IntVec(facets_.row(j).transpose()), r) != 0) {
        on = false;
        break;
      }
    if (on) gens.push_back(r);
  }
  for (Eigen::Index i = 0; i < lineality_.rows(); ++i) {
    gens.emplace_back(lineality_.row(i).transpose());
    gens.emplace_back(-lineality_.row(i).transpose());
  }
  return from_generators(gens, ambient_);
}

std::vector<Cone> Cone::faces() const {
  if (is_simplicial()) {
    const auto rays = matrix_to_rows(rays_);
    std::vector<Cone> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << rays.size()); ++mask) {
      std::vector<IntVec> sub;
      for (std::size_t i = 0; i < rays.size(); ++i)
        if (mask >> i & 1) sub.push_back(rays[i]);
      out.push_back(simplicial(sub, ambient_));
    }
    return out;
  }
  const auto nr = static_cast<std::size_t>(rays_.rows());
  const auto nf = static_cast<std::size_t>(facets_.rows());
  std::vector<boost::dynamic_bitset<>> on_facet(nf, boost::dynamic_bitset<>(nr));
  for (std::size_t j = 0; j < nf; ++j)
    for (std::size_t i = 0; i < nr; ++i)
      on_facet[j][i] = dot(IntVec(facets_.row(static_cast<Eigen::Index>(j)).transpose()),
                           IntVec(rays_.row(static_cast<Eigen::Index>(i)).transpose())) == 0;

  std::map<boost::dynamic_bitset<>, bool> seen;
  std::vector<boost::dynamic_bitset<>> queue;
  boost::dynamic_bitset<> all(nr);
  all.set();
  seen[all] = true;
  queue.push_back(all);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (std::size_t j = 0; j < nf; ++j) {
      auto next = queue[head] & on_facet[j];
      if (next == queue[head] || seen.count(next)) continue;
      seen[next] = true;
      queue.push_back(next);
    }
  }
  std::vector<Cone> out;
  out.reserve(queue.size());
  for (const auto& mask : queue) {
    if (mask == all) {
      out.push_back(*this);
      continue;
    }
    std::vector<IntVec> gens;
    for (std::size_t i = 0; i < nr; ++i)
      if (mask[i]) gens.emplace_back(rays_.row(static_cast<Eigen::Index>(i)).transpose());
    for (Eigen::Index i = 0; i < lineality_.rows(); ++i) {
      gens.emplace_back(lineality_.row(i).transpose());
      gens.emplace_back(-lineality_.row(i).transpose());
    }
    out.push_back(from_generators(gens, ambient_));
  }
  return out;
}

std::vector<Cone> Cone::codim_one_faces() const {
  std::vector<Cone> out;
  if (is_simplicial_mod_lineality()) {
    const auto rays = matrix_to_rows(rays_);
    const auto lin = matrix_to_rows(lineality_);
    for (std::size_t skip = 0; skip < rays.size(); ++skip) {
      std::vector<IntVec> sub;
      for (std::size_t i = 0; i < rays.size(); ++i)
        if (i != skip) sub.push_back(rays[i]);
      out.push_back(simplicial(sub, lin, ambient_));
    }
    return out;
  }
  for (Eigen::Index j = 0; j < facets_.rows(); ++j) out.push_back(face_on({j}));
  return out;
}

IntVec Cone::interior_point() const {
  IntVec p = IntVec::Zero(ambient_);
  for (Eigen::Index i = 0; i < rays_.rows(); ++i) p += rays_.row(i).transpose();
  return p;
}

IntVec normal_vector(const Cone& tau, const Cone& sigma) {
  if (tau.dim() + 1 != sigma.dim() || !tau.is_face_of(sigma))
    throw Error(Errc::NotCodimOne, "tau is not a codimension one face of sigma");
  const IntMat& bs = sigma.span_lattice().basis();
  const Lattice& lt = tau.span_lattice();
  const Eigen::Index k = bs.rows();
  // Lambda_tau in coordinates of the Lambda_sigma basis, and the primitive
  // form on Z^k vanishing on it.
  IntMat coords(lt.rank(), k);
  for (Eigen::Index i = 0; i < lt.rank(); ++i)
    coords.row(i) = to_integer(*sigma.span_lattice().coordinates(
                                   to_rational(IntVec(lt.basis().row(i).transpose()))))
                        .transpose();
  IntVec phi = integer_kernel(coords).row(0).transpose();
  for (Eigen::Index i = 0; i < sigma.rays().rows(); ++i) {
    const IntVec r = sigma.rays().row(i).transpose();
    if (tau.contains(r)) continue;
    const IntVec c = to_integer(*sigma.span_lattice().coordinates(to_rational(r)));
    if (dot(phi, c) < 0) phi = -phi;
    break;
  }
  IntVec x = IntVec::Zero(k);
  Integer g = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    Integer s, t;
    const Integer g2 = extended_gcd(g, phi(i), s, t);
    x *= s;
    x(i) += t;
    g = g2;
  }
  const IntVec u = bs.transpose() * x;
  return lt.reduce(u);
}

}  // namespace tropfan
