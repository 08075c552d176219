#include "tropfan/morphism.hpp"

#include "tropfan/errors.hpp"
#include "tropfan/linalg.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tropfan {

namespace {

IntVec sign_normalized(IntVec v) {
  v = make_primitive(v);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) == 0) continue;
    if (v(i) < 0) v = -v;
    break;
  }
  return v;
}

struct FormSet {
  std::vector<IntVec> forms;
  std::set<std::string> seen;
  void add(const IntVec& v) {
    if (is_zero(v)) return;
    IntVec n = sign_normalized(v);
    if (seen.insert(to_string(n)).second) forms.push_back(std::move(n));
  }
};

std::vector<IntVec> pull_back(const IntMat& m, const std::vector<IntVec>& forms) {
  FormSet out;
  for (const auto& g : forms) out.add(IntVec(m.transpose() * g));
  return out.forms;
}

bool target_contains(const Fan& y, const Cone& c) {
  for (auto j : y.maximal())
    if (y.cone(j).contains(c)) return true;
  return false;
}

void check_into_target(const WeightedFan& x, const Fan& y, const IntMat& m) {
  if (m.cols() != x.ambient_rank() || m.rows() != y.ambient_rank())
    throw Error(Errc::DimensionMismatch, "matrix shape does not match the fans");
  std::vector<IntVec> pulled;
  bool harvested = false;
  for (auto i : x.fan().maximal()) {
    const Cone& sigma = x.fan().cone(i);
    if (target_contains(y, sigma.image(m))) continue;
    if (!harvested) {
      FormSet target_forms;
      for (auto j : y.maximal()) {
        for (const auto& r : matrix_to_rows(y.cone(j).equalities())) target_forms.add(r);
        for (const auto& r : matrix_to_rows(y.cone(j).facets())) target_forms.add(r);
      }
      pulled = pull_back(m, target_forms.forms);
      harvested = true;
    }
    for (const auto& piece : split_by_forms(sigma, pulled)) {
      if (target_contains(y, piece.image(m))) continue;
      const IntVec u0 = piece.interior_point();
      throw Error(Errc::NotIntoTarget, "point " + to_string(u0) + " maps to " +
                                           to_string(IntVec(m * u0)) +
                                           " outside the target support");
    }
  }
}

// Rows spanning f(Lambda_sigma).
IntMat image_lattice_rows(const IntMat& m, const Cone& sigma) {
  return sigma.span_lattice().basis() * m.transpose();
}

}  // namespace

FanMorphism::FanMorphism(WeightedFan source, Fan target, IntMat matrix,
                         std::vector<Integer> target_weights)
    : source_(std::move(source)),
      target_(std::move(target)),
      matrix_(std::move(matrix)),
      target_weights_(std::move(target_weights)) {
  if (target_weights_.empty()) target_weights_.assign(target_.maximal().size(), Integer(1));
  if (target_weights_.size() != target_.maximal().size())
    throw Error(Errc::Precondition, "one target weight per maximal target cone required");
  check_into_target(source_, target_, matrix_);
}

FanMorphism FanMorphism::trusted(WeightedFan source, Fan target, IntMat matrix,
                                 std::vector<Integer> target_weights) {
  FanMorphism f;
  f.source_ = std::move(source);
  f.target_ = std::move(target);
  f.matrix_ = std::move(matrix);
  f.target_weights_ = std::move(target_weights);
  if (f.target_weights_.empty()) f.target_weights_.assign(f.target_.maximal().size(), Integer(1));
  if (f.matrix_.cols() != f.source_.ambient_rank() || f.matrix_.rows() != f.target_.ambient_rank())
    throw Error(Errc::DimensionMismatch, "matrix shape does not match the fans");
  return f;
}

Integer FanMorphism::target_weight(std::size_t i) const {
  const auto& mx = target_.maximal();
  auto it = std::lower_bound(mx.begin(), mx.end(), i);
  if (it == mx.end() || *it != i)
    throw Error(Errc::Precondition, "weight requested for a non-maximal target cone");
  return target_weights_[static_cast<std::size_t>(it - mx.begin())];
}

WeightedFan FanMorphism::weighted_target() const { return WeightedFan(target_, target_weights_); }

bool FanMorphism::injective_on(std::size_t i) const {
  const Cone& c = source_.fan().cone(i);
  return rank(image_lattice_rows(matrix_, c)) == c.dim();
}

FanMorphism morphism_new(const WeightedFan& source, const Fan& target, const IntMat& matrix) {
  return FanMorphism(source, target, matrix);
}

std::vector<Cone> split_by_forms(const Cone& sigma, const std::vector<IntVec>& forms) {
  const Eigen::Index n = sigma.ambient_rank();
  const IntMat none(0, n);
  std::vector<Cone> pieces{sigma};
  for (const auto& h : forms) {
    std::vector<Cone> next;
    next.reserve(pieces.size());
    for (auto& piece : pieces) {
      bool pos = false, neg = false;
      for (const auto& g : piece.generators()) {
        const Integer d = dot(h, g);
        pos = pos || d > 0;
        neg = neg || d < 0;
      }
      if (!(pos && neg)) {
        next.push_back(std::move(piece));
        continue;
      }
      const IntMat row = h.transpose();
      next.push_back(piece.intersect(Cone::from_inequalities(none, row, n)));
      next.push_back(piece.intersect(Cone::from_inequalities(none, IntMat(-row), n)));
    }
    pieces = std::move(next);
  }
  return pieces;
}

Integer lattice_image_index(const FanMorphism& f, std::size_t i, std::size_t j) {
  return lattice_index(image_lattice_rows(f.matrix(), f.source().fan().cone(i)),
                       f.target().cone(j).span_lattice());
}

Rational lattice_multiplicity(const FanMorphism& f, std::size_t i, std::size_t j) {
  return Rational(f.source().weight_of(i)) / Rational(f.target_weight(j)) *
         Rational(lattice_image_index(f, i, j));
}

WeightedFan image_fan(const FanMorphism& f, bool reverse_forms) {
  const IntMat& m = f.matrix();
  const Fan& x = f.source().fan();
  std::vector<std::size_t> injective;
  for (auto i : x.maximal())
    if (f.injective_on(i)) injective.push_back(i);
  const Eigen::Index out_rank = m.rows();
  if (injective.empty())
    return WeightedFan(Fan::from_cones({}, out_rank, {FanValidation::Mode::Trusted}), {});

  FormSet harvested;
  for (auto i : injective) {
    const Cone img = x.cone(i).image(m);
    for (const auto& r : matrix_to_rows(img.equalities())) harvested.add(r);
    for (const auto& r : matrix_to_rows(img.facets())) harvested.add(r);
  }
  std::vector<IntVec> forms = harvested.forms;
  if (reverse_forms) std::reverse(forms.begin(), forms.end());
  const auto pulled = pull_back(m, forms);

  std::map<std::string, std::pair<Cone, Integer>> images;
  for (auto i : injective) {
    const Cone& sigma = x.cone(i);
    const IntMat rows = image_lattice_rows(m, sigma);
    for (const auto& piece : split_by_forms(sigma, pulled)) {
      Cone img = piece.image(m);
      const Integer w = f.source().weight_of(i) * lattice_index(rows, img.span_lattice());
      auto [it, fresh] = images.try_emplace(img.key(), img, w);
      if (!fresh) it->second.second += w;
    }
  }
  std::vector<Cone> cones;
  for (const auto& [key, entry] : images) cones.push_back(entry.first);
  Fan z = Fan::from_cones(cones, out_rank, {FanValidation::Mode::Trusted});
  std::vector<Integer> weights;
  for (auto j : z.maximal()) weights.push_back(images.at(z.cone(j).key()).second);
  return WeightedFan(std::move(z), std::move(weights));
}

bool check_pushforward_balanced(const FanMorphism& f) {
  return is_balanced(image_fan(f)).balanced;
}

std::vector<Preimage> preimages(const FanMorphism& f, const RatVec& q) {
  const IntMat& m = f.matrix();
  const Fan& x = f.source().fan();
  const Fan& y = f.target();
  if (q.size() != y.ambient_rank()) throw Error(Errc::DimensionMismatch, "point has wrong length");
  const Eigen::Index n = x.dim();
  const auto where = locate_point(y, q);
  if (!where || y.cone(*where).dim() != n || !y.cofacets_of(*where).empty())
    throw Error(Errc::NotGeneric, "point " + to_string(q) +
                                      " is not interior to a maximal target cone of the source dimension");

  // q must avoid f(sigma) whenever dim f(sigma) < n; checking the largest such cones suffices.
  std::vector<char> low(x.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i)
    low[i] = rank(image_lattice_rows(m, x.cone(i))) < n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!low[i]) continue;
    bool top = true;
    for (auto c : x.cofacets_of(i)) top = top && !low[c];
    if (top && x.cone(i).image(m).contains(q))
      throw Error(Errc::NotGeneric, "point " + to_string(q) + " lies in the image of a cone of " +
                                        "smaller dimension");
  }

  std::vector<Preimage> out;
  for (auto i : x.maximal()) {
    if (low[i]) continue;
    const Cone& sigma = x.cone(i);
    const RatMat b = to_rational(sigma.span_lattice().basis());
    const RatMat a = to_rational(m) * b.transpose();
    auto sol = solve_affine(a, q);
    if (!sol) continue;
    RatVec p = b.transpose() * sol->particular;
    if (!sigma.contains(p)) continue;
    out.push_back({std::move(p), i, *where, lattice_multiplicity(f, i, *where)});
  }
  return out;
}

RatVec sample_target_point(const Fan& target, std::mt19937_64& rng, long long bound) {
  const auto& mx = target.maximal();
  if (mx.empty()) throw Error(Errc::Precondition, "target fan is empty");
  std::uniform_int_distribution<std::size_t> pick(0, mx.size() - 1);
  std::uniform_int_distribution<long long> pos(1, bound), any(-bound, bound);
  const Cone& c = target.cone(mx[pick(rng)]);
  IntVec p = IntVec::Zero(target.ambient_rank());
  for (Eigen::Index r = 0; r < c.rays().rows(); ++r)
    p += Integer(pos(rng)) * IntVec(c.rays().row(r).transpose());
  for (Eigen::Index r = 0; r < c.lineality().rows(); ++r)
    p += Integer(any(rng)) * IntVec(c.lineality().row(r).transpose());
  return to_rational(p);
}

DegreeResult degree(const FanMorphism& f, const IrreducibilityCertificate& target_certificate,
                    int trials, std::uint64_t seed, int retries) {
  (void)target_certificate;
  if (f.source().dim() != f.target().dim() || !f.target().is_pure())
    throw Error(Errc::WrongDimension, "degree needs a pure target of the source dimension");
  if (trials < 1) throw Error(Errc::BadRange, "at least one trial required");
  std::mt19937_64 rng(seed);
  DegreeResult out;
  for (int t = 0; t < trials; ++t) {
    bool done = false;
    for (int attempt = 0; attempt < retries && !done; ++attempt) {
      RatVec q = sample_target_point(f.target(), rng);
      std::vector<Preimage> pre;
      try {
        pre = preimages(f, q);
      } catch (const Error& e) {
        if (e.code() != Errc::NotGeneric) throw;
        continue;
      }
      Rational sum = 0;
      for (const auto& p : pre) sum += p.multiplicity;
      out.points.push_back(std::move(q));
      out.sums.push_back(sum);
      done = true;
    }
    if (!done) throw Error(Errc::RetriesExhausted, "no generic point found");
  }
  for (const auto& s : out.sums)
    if (s != out.sums.front())
      throw Error(Errc::DegreeMismatch, "preimage sums differ: " + out.sums.front().str() +
                                            " and " + s.str());
  out.degree = out.sums.front();
  return out;
}

Rational det_multiplicity(const MarkedFan& source, const IntMat& matrix, std::size_t i,
                          const MarkedFan& target, std::size_t j) {
  const auto v = source.cone_markings(i);
  const auto w = target.cone_markings(j);
  const auto n = static_cast<Eigen::Index>(v.size());
  if (static_cast<Eigen::Index>(w.size()) != n)
    throw Error(Errc::SingularRestriction, "cones of different dimensions");
  RatMat wcols(matrix.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) wcols.col(k) = to_rational(w[static_cast<std::size_t>(k)]);
  RatMat a(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    auto sol = solve_affine(wcols, to_rational(IntVec(matrix * v[static_cast<std::size_t>(k)])));
    if (!sol) throw Error(Errc::SingularRestriction, "image leaves the target span");
    a.row(k) = sol->particular.transpose();
  }
  const Rational d = determinant(a);
  if (d == 0) throw Error(Errc::SingularRestriction, "restriction is not injective");
  return abs(d);
}

}  // namespace tropfan
