#include "tropfan/tropical.hpp"

#include "tropfan/errors.hpp"
#include "tropfan/linalg.hpp"

#include <limits>
#include <map>
#include <unordered_map>

namespace tropfan {

namespace {

constexpr std::size_t kNoSlot = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> slots_for(const Fan& f, const std::vector<std::size_t>& members) {
  std::vector<std::size_t> slot(f.size(), kNoSlot);
  for (std::size_t k = 0; k < members.size(); ++k) slot[members[k]] = k;
  return slot;
}

bool in_span_of(const Cone& tau, const IntVec& v) {
  const IntMat& eq = tau.equalities();
  for (Eigen::Index i = 0; i < eq.rows(); ++i)
    if (dot(IntVec(eq.row(i).transpose()), v) != 0) return false;
  return true;
}

// The ray of sigma that is not a ray of tau.
IntVec extra_ray(const Cone& tau, const Cone& sigma) {
  for (Eigen::Index i = 0; i < sigma.rays().rows(); ++i) {
    const IntVec r = sigma.rays().row(i).transpose();
    if (!tau.contains(r)) return r;
  }
  throw Error(Errc::NotCodimOne, "no ray of sigma outside tau");
}

bool on_boundary(const Cone& sigma, const Cone& face) {
  const auto gens = face.generators();
  for (Eigen::Index j = 0; j < sigma.facets().rows(); ++j) {
    const IntVec g = sigma.facets().row(j).transpose();
    bool tight = true;
    for (const auto& v : gens)
      if (dot(g, v) != 0) {
        tight = false;
        break;
      }
    if (tight) return true;
  }
  return false;
}

RatVec sign_normalized(RatVec v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) != 0) {
      if (v(i) < 0) v = -v;
      break;
    }
  return v;
}

Cone project_cone(const Cone& c, Eigen::Index start, Eigen::Index len) {
  std::vector<IntVec> gens;
  for (const auto& g : c.generators()) gens.emplace_back(g.segment(start, len));
  return Cone::from_generators(gens, len);
}

}  // namespace

WeightedFan::WeightedFan(Fan fan, std::vector<Integer> weights)
    : fan_(std::move(fan)), weights_(std::move(weights)) {
  if (!fan_.is_pure()) throw Error(Errc::Precondition, "weighted fan must be pure");
  if (weights_.size() != fan_.maximal().size())
    throw Error(Errc::Precondition, "one weight per maximal cone required");
  for (const auto& w : weights_)
    if (w <= 0) throw Error(Errc::NonIntegralWeight, "weights must be positive integers");
  slot_ = slots_for(fan_, fan_.maximal());
}

WeightedFan WeightedFan::unit(Fan fan) {
  std::vector<Integer> w(fan.maximal().size(), Integer(1));
  return WeightedFan(std::move(fan), std::move(w));
}

const Integer& WeightedFan::weight_of(std::size_t cone_index) const {
  if (cone_index >= slot_.size() || slot_[cone_index] == kNoSlot)
    throw Error(Errc::Precondition, "weight requested for a non-maximal cone");
  return weights_[slot_[cone_index]];
}

MarkedFan::MarkedFan(Fan fan, std::vector<IntVec> markings)
    : fan_(std::move(fan)), markings_(std::move(markings)) {
  if (!fan_.is_pure() || !fan_.is_simplicial())
    throw Error(Errc::Precondition, "marked fan must be pure and simplicial");
  const auto rays = fan_.of_dim(1);
  if (markings_.size() != rays.size())
    throw Error(Errc::Precondition, "one marking per ray required");
  for (std::size_t k = 0; k < rays.size(); ++k) {
    const Cone& ray = fan_.cone(rays[k]);
    if (is_zero(markings_[k]) || !ray.contains(markings_[k]))
      throw Error(Errc::Precondition, "marking " + to_string(markings_[k]) + " is not on its ray");
  }
  slot_ = slots_for(fan_, rays);
}

MarkedFan MarkedFan::primitive(Fan fan) {
  std::vector<IntVec> m;
  for (auto i : fan.of_dim(1)) m.emplace_back(fan.cone(i).rays().row(0).transpose());
  return MarkedFan(std::move(fan), std::move(m));
}

const IntVec& MarkedFan::marking(std::size_t ray_index) const {
  if (ray_index >= slot_.size() || slot_[ray_index] == kNoSlot)
    throw Error(Errc::Precondition, "marking requested for a non-ray cone");
  return markings_[slot_[ray_index]];
}

std::vector<IntVec> MarkedFan::cone_markings(std::size_t i) const {
  const Cone& c = fan_.cone(i);
  std::vector<IntVec> out;
  for (Eigen::Index r = 0; r < c.rays().rows(); ++r) {
    const auto idx = fan_.find(Cone::simplicial({c.rays().row(r).transpose()}, c.ambient_rank()));
    out.push_back(marking(*idx));
  }
  return out;
}

BalanceReport is_balanced(const WeightedFan& x) {
  BalanceReport report;
  const Fan& f = x.fan();
  const Eigen::Index n = f.dim();
  if (n <= 0) return report;
  for (auto t : f.of_dim(n - 1)) {
    const Cone& tau = f.cone(t);
    IntVec sum = IntVec::Zero(f.ambient_rank());
    for (auto s : f.cofacets_of(t)) sum += x.weight_of(s) * normal_vector(tau, f.cone(s));
    if (!in_span_of(tau, sum)) {
      report.balanced = false;
      report.tau = t;
      report.residual = tau.span_lattice().reduce(sum);
      return report;
    }
  }
  return report;
}

WeightedFan marked_to_weighted(const MarkedFan& m) {
  const Fan& f = m.fan();
  std::vector<Integer> w;
  for (auto i : f.maximal()) {
    const auto marks = m.cone_markings(i);
    w.push_back(lattice_index(rows_to_matrix(marks, f.ambient_rank()), f.cone(i).span_lattice()));
  }
  return WeightedFan(f, std::move(w));
}

BalanceReport is_balanced_marked(const MarkedFan& m) {
  BalanceReport report;
  const Fan& f = m.fan();
  const Eigen::Index n = f.dim();
  if (n <= 0) return report;
  for (auto t : f.of_dim(n - 1)) {
    const Cone& tau = f.cone(t);
    IntVec sum = IntVec::Zero(f.ambient_rank());
    for (auto s : f.cofacets_of(t)) {
      const IntVec r = extra_ray(tau, f.cone(s));
      sum += m.marking(*f.find(Cone::simplicial({r}, f.ambient_rank())));
    }
    if (!in_span_of(tau, sum)) {
      report.balanced = false;
      report.tau = t;
      report.residual = tau.span_lattice().reduce(sum);
      return report;
    }
  }
  return report;
}

bool covers(const Fan& y, const Cone& sigma) {
  // The full-dimensional pieces sigma & sigma' cover sigma exactly when every
  // wall between pieces inside the relative interior of sigma has two sides.
  const Eigen::Index d = sigma.dim();
  std::map<std::string, Cone> pieces;
  for (auto j : y.maximal()) {
    Cone piece = sigma.intersect(y.cone(j));
    if (piece.dim() == d) pieces.emplace(piece.key(), std::move(piece));
  }
  if (pieces.empty()) return false;
  std::unordered_map<std::string, int> sides;
  std::unordered_map<std::string, bool> interior;
  for (const auto& [key, piece] : pieces)
    for (const auto& wall : piece.codim_one_faces()) {
      ++sides[wall.key()];
      if (!interior.count(wall.key())) interior[wall.key()] = !on_boundary(sigma, wall);
    }
  for (const auto& [key, count] : sides)
    if (interior[key] && count < 2) return false;
  return true;
}

WeightedFan refine_onto(const WeightedFan& x, const Fan& y) {
  if (x.empty()) return x;
  for (auto i : x.fan().maximal())
    if (!covers(y, x.fan().cone(i)))
      throw Error(Errc::SupportNotContained, "support of the fan is not contained in |Y|");
  Fan r = intersect_fans(x.fan(), y);
  std::vector<Integer> w;
  for (auto i : r.maximal()) {
    auto c = locate_point(x.fan(), to_rational(r.cone(i).interior_point()));
    w.push_back(x.weight_of(*c));
  }
  return WeightedFan(std::move(r), std::move(w));
}

bool is_refinement(const WeightedFan& y, const WeightedFan& x) {
  if (x.ambient_rank() != y.ambient_rank() || x.dim() != y.dim()) return false;
  for (auto i : y.fan().maximal()) {
    const Cone& s = y.fan().cone(i);
    auto c = locate_point(x.fan(), to_rational(s.interior_point()));
    if (!c || !x.fan().cone(*c).contains(s)) return false;
    if (x.fan().cone(*c).dim() != x.dim()) return false;
    if (y.weight_of(i) != x.weight_of(*c)) return false;
  }
  for (auto i : x.fan().maximal())
    if (!covers(y.fan(), x.fan().cone(i))) return false;
  return true;
}

bool equivalent(const WeightedFan& x, const WeightedFan& y) {
  if (x.ambient_rank() != y.ambient_rank()) return false;
  if (x.empty() || y.empty()) return x.empty() && y.empty();
  if (x.dim() != y.dim()) return false;
  for (auto i : x.fan().maximal())
    if (!covers(y.fan(), x.fan().cone(i))) return false;
  for (auto i : y.fan().maximal())
    if (!covers(x.fan(), y.fan().cone(i))) return false;
  const WeightedFan xy = refine_onto(x, y.fan());
  const WeightedFan yx = refine_onto(y, x.fan());
  if (xy.fan().size() != yx.fan().size()) return false;
  for (std::size_t i = 0; i < xy.fan().size(); ++i)
    if (!(xy.fan().cone(i) == yx.fan().cone(i))) return false;
  return xy.weights() == yx.weights();
}

WeightedFan scale(const Rational& lambda, const WeightedFan& x) {
  std::vector<Integer> w;
  for (const auto& v : x.weights()) {
    const Rational s = lambda * Rational(v);
    if (s <= 0 || denominator_of(s) != 1)
      throw Error(Errc::NonIntegralWeight, "scaled weight is not a positive integer");
    w.push_back(numerator_of(s));
  }
  return WeightedFan(x.fan(), std::move(w));
}

WeightedFan product_weighted(const WeightedFan& x, const WeightedFan& y) {
  Fan p = product_fan(x.fan(), y.fan());
  std::map<std::size_t, Integer> by_cone;
  for (auto i : x.fan().maximal())
    for (auto j : y.fan().maximal()) {
      const Cone c = x.fan().cone(i).product(y.fan().cone(j));
      by_cone[*p.find(c)] = x.weight_of(i) * y.weight_of(j);
    }
  std::vector<Integer> w;
  for (auto k : p.maximal()) w.push_back(by_cone.at(k));
  return WeightedFan(std::move(p), std::move(w));
}

std::vector<RatVec> balancing_weight_space(const Fan& f) {
  const auto& maxi = f.maximal();
  const auto slot = slots_for(f, maxi);
  const Eigen::Index n = f.dim();
  const auto m = static_cast<Eigen::Index>(maxi.size());
  std::vector<std::vector<Rational>> rows;
  if (n > 0)
    for (auto t : f.of_dim(n - 1)) {
      const Cone& tau = f.cone(t);
      const IntMat& eq = tau.equalities();
      std::vector<std::vector<Rational>> block(static_cast<std::size_t>(eq.rows()),
                                               std::vector<Rational>(static_cast<std::size_t>(m)));
      for (auto s : f.cofacets_of(t)) {
        const IntVec u = normal_vector(tau, f.cone(s));
        for (Eigen::Index e = 0; e < eq.rows(); ++e)
          block[static_cast<std::size_t>(e)][slot[s]] = Rational(dot(IntVec(eq.row(e).transpose()), u));
      }
      for (auto& r : block) rows.push_back(std::move(r));
    }
  RatMat a(static_cast<Eigen::Index>(rows.size()), m);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Eigen::Index j = 0; j < m; ++j) a(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
  std::vector<RatVec> basis;
  for (auto& v : kernel_basis(a)) basis.push_back(sign_normalized(v));
  return basis;
}

const char* kind_name(IrreducibilityCertificate::Kind k) {
  switch (k) {
    case IrreducibilityCertificate::Kind::FullSpace: return "FullSpace";
    case IrreducibilityCertificate::Kind::Line: return "Line";
    case IrreducibilityCertificate::Kind::StandardL1: return "StandardL1";
    case IrreducibilityCertificate::Kind::ProductOfIrreducibles: return "ProductOfIrreducibles";
    case IrreducibilityCertificate::Kind::WeightSpaceCertificate: return "WeightSpaceCertificate";
  }
  return "?";
}

namespace {

std::optional<RatVec> positive_weight_generator(const Fan& f) {
  const auto space = balancing_weight_space(f);
  if (space.size() != 1) return std::nullopt;
  for (Eigen::Index i = 0; i < space[0].size(); ++i)
    if (space[0](i) <= 0) return std::nullopt;
  return space[0];
}

std::optional<IrreducibilityCertificate> certify_product(const WeightedFan& x) {
  const Fan& f = x.fan();
  const Eigen::Index n = f.ambient_rank();
  for (Eigen::Index k = 1; k < n; ++k) {
    std::map<std::string, Cone> left, right;
    std::map<std::string, std::size_t> pairs;
    bool splits = true;
    for (auto i : f.maximal()) {
      const Cone& c = f.cone(i);
      Cone a = project_cone(c, 0, k), b = project_cone(c, k, n - k);
      if (!(a.product(b) == c)) {
        splits = false;
        break;
      }
      pairs[a.key() + "#" + b.key()] = i;
      left.emplace(a.key(), std::move(a));
      right.emplace(b.key(), std::move(b));
    }
    if (!splits || left.size() * right.size() != f.maximal().size()) continue;

    // Factor weights from the slices through one fixed cone of the other side.
    const std::string a0 = left.begin()->first, b0 = right.begin()->first;
    std::vector<Cone> lc, rc;
    for (auto& [key, c] : left) lc.push_back(c);
    for (auto& [key, c] : right) rc.push_back(c);
    Fan fl = Fan::from_cones(lc, k), fr = Fan::from_cones(rc, n - k);
    std::vector<Integer> wl, wr;
    for (auto i : fl.maximal()) wl.push_back(x.weight_of(pairs.at(fl.cone(i).key() + "#" + b0)));
    for (auto i : fr.maximal()) wr.push_back(x.weight_of(pairs.at(a0 + "#" + fr.cone(i).key())));
    const WeightedFan xl(std::move(fl), std::move(wl)), xr(std::move(fr), std::move(wr));
    if (!is_balanced(xl) || !is_balanced(xr)) continue;
    auto cl = certify_irreducible(xl);
    auto cr = certify_irreducible(xr);
    if (!cl || !cr) continue;
    IrreducibilityCertificate cert;
    cert.kind = IrreducibilityCertificate::Kind::ProductOfIrreducibles;
    cert.split = k;
    cert.factors = {*cl, *cr};
    return cert;
  }
  return std::nullopt;
}

}  // namespace

std::optional<IrreducibilityCertificate> certify_irreducible(const WeightedFan& x) {
  if (x.empty() || !is_balanced(x)) return std::nullopt;
  const Fan& f = x.fan();
  const Eigen::Index n = f.ambient_rank();
  IrreducibilityCertificate cert;
  if (x.dim() == n && covers(f, Cone::full_space(n))) {
    cert.kind = IrreducibilityCertificate::Kind::FullSpace;
    return cert;
  }
  if (x.dim() == 1) {
    const auto& maxi = f.maximal();
    const bool one_line = maxi.size() == 1 && f.cone(maxi[0]).lineality().rows() == 1;
    const bool two_rays = maxi.size() == 2 && f.cone(maxi[0]).lineality().rows() == 0 &&
                          IntVec(f.cone(maxi[0]).rays().row(0).transpose()) ==
                              IntVec(-f.cone(maxi[1]).rays().row(0).transpose());
    if (one_line || two_rays) {
      cert.kind = IrreducibilityCertificate::Kind::Line;
      return cert;
    }
    if (f.cone(maxi[0]).lineality().rows() == 0) {
      std::vector<IntVec> rays;
      for (auto i : maxi) rays.emplace_back(f.cone(i).rays().row(0).transpose());
      const IntMat r = rows_to_matrix(rays, n);
      // Proper subsets independent: the unique relation has full support.
      const auto rel = kernel_basis(to_rational(IntMat(r.transpose())));
      bool full_support = rel.size() == 1;
      if (full_support)
        for (Eigen::Index i = 0; i < rel[0].size(); ++i)
          if (rel[0](i) == 0) full_support = false;
      if (full_support) {
        if (auto g = positive_weight_generator(f)) {
          cert.kind = IrreducibilityCertificate::Kind::StandardL1;
          cert.weight_generator = *g;
          return cert;
        }
      }
    }
  }
  if (auto p = certify_product(x)) return p;
  if (auto g = positive_weight_generator(f)) {
    cert.kind = IrreducibilityCertificate::Kind::WeightSpaceCertificate;
    cert.weight_generator = *g;
    return cert;
  }
  return std::nullopt;
}

}  // namespace tropfan
