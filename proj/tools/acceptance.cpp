// Runs the acceptance criteria and prints one PASS/FAIL line for each.
#include "tropfan/enumeration.hpp"
#include "tropfan/errors.hpp"
#include "tropfan/linalg.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

using namespace tropfan;

namespace {

// Time budgets in seconds.
constexpr double kBalancingBudget = 1;
constexpr double kModuliBudget = 60;  // for n = 7 alone
constexpr double kLineBudget = 1;
constexpr double kPushforwardBudget = 60;
constexpr double kLineCountBudget = 1;  // per seed
constexpr double kConicBudget = 1800;   // all seeds
constexpr double kSpaceLinesBudget = 30;  // per seed
constexpr double kCrossRatioBudget = 60;
constexpr int kPushforwardPairs = 100;
constexpr int kDegreePoints = 10;
// The cross-ratio analogue pinned from its first run.
const Rational kCrossRatioDegree = 1;

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) note << what;
    pass = pass && ok;
  }
};

// Solutions of criteria 7-9 with the problems that produced them.
std::vector<std::pair<CountProblem, CurveSolution>> g_solutions;

void keep(const CountProblem& p, const CountResult& r) {
  for (const auto& s : r.solutions) g_solutions.emplace_back(p, s);
}

CountProblem with_points(CountProblem p, std::uint64_t seed) {
  std::vector<ConstraintShape> shape;
  for (const auto& c : p.constraints) shape.push_back({c.end, c.directions});
  p.constraints = sample_generic_constraints(shape, static_cast<int>(p.delta.r), seed);
  return p;
}

CountProblem all_points(const Degree& delta, int n) {
  return {delta, n, sample_generic_constraints(static_cast<int>(delta.r), delta, n, 1), {}};
}

void balancing(Outcome& o) {
  const auto t = Clock::now();
  for (int n = 0; n <= 5; ++n)
    for (int k = 0; k <= n; ++k)
      o.require(static_cast<bool>(is_balanced_marked(MarkedFan::primitive(standard_L(k, n)))),
                "L^" + std::to_string(k) + "_" + std::to_string(n) + " unbalanced");
  o.note << (o.pass ? "" : "; ") << "21 fans, " << since(t) << " s";
  o.require(since(t) < kBalancingBudget, "; over budget");
}

void moduli(Outcome& o) {
  for (int n = 4; n <= 7; ++n) {
    const auto t = Clock::now();
    const ModuliFan m = build_m0n(n);
    const Fan& f = m.fan.fan();
    const std::string tag = "M_0," + std::to_string(n) + ": ";
    o.require(f.is_simplicial() && f.is_pure() && f.dim() == n - 3, tag + "not simplicial pure of dim n-3; ");
    o.require(f.of_dim(1).size() == (std::size_t{1} << (n - 1)) - static_cast<std::size_t>(n) - 1, tag + "ray count; ");
    o.require(f.maximal().size() == trivalent_type_count(n), tag + "maximal cone count; ");
    o.require(static_cast<bool>(is_balanced_marked(m.fan)), tag + "unbalanced; ");
    const double s = since(t);
    o.note << "n=" << n << " " << f.maximal().size() << " cones " << s << " s" << (n < 7 ? ", " : "");
    if (n == 7) o.require(s < kModuliBudget, "; n=7 over budget");
  }
}

void line_isomorphism(Outcome& o) {
  const auto t = Clock::now();
  const ModuliFan m = build_m0n(4);
  IntMat basis(2, 2);
  basis.col(0) = m.space.ray(label_bit(1) | label_bit(2));
  basis.col(1) = m.space.ray(label_bit(1) | label_bit(3));
  o.require(abs(determinant(basis)) == 1, "v12, v13 is not a lattice basis");
  if (!o.pass) return;
  const IntMat change = to_integer(inverse(to_rational(basis)));
  std::vector<Cone> mapped;
  for (const auto& c : m.fan.fan().cones()) mapped.push_back(c.image(change));
  const Fan image = Fan::from_cones(mapped, 2);
  const Fan line = standard_L(1, 2);
  bool same = image.size() == line.size();
  for (std::size_t i = 0; same && i < image.size(); ++i) same = image.cone(i) == line.cone(i);
  o.require(same, "image of M_0,4 differs from L^1_2");
  const auto markings = m.fan.markings();
  for (const auto& v : markings) o.require(make_primitive(v) == v, "non-primitive marking");
  o.note << (o.pass ? "" : "; ") << since(t) << " s";
  o.require(since(t) < kLineBudget, "; over budget");
}

void pushforwards(Outcome& o) {
  const auto t = Clock::now();
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<long long> entry(-3, 3);
  const std::vector<WeightedFan> sources = {
      WeightedFan::unit(standard_L(1, 2)), WeightedFan::unit(standard_L(1, 3)),
      WeightedFan::unit(standard_L(2, 3)),
      scale(2, WeightedFan::unit(standard_L(1, 2))),
      product_weighted(WeightedFan::unit(standard_L(1, 2)), WeightedFan::unit(full_space_fan(1))),
      marked_to_weighted(build_m0n(5).fan)};
  int bad = 0, empty = 0;
  for (int i = 0; i < kPushforwardPairs; ++i) {
    const WeightedFan& x = sources[static_cast<std::size_t>(i) % sources.size()];
    const Eigen::Index rows = 1 + static_cast<Eigen::Index>(rng() % 3);
    IntMat m(rows, x.ambient_rank());
    for (Eigen::Index a = 0; a < m.rows(); ++a)
      for (Eigen::Index b = 0; b < m.cols(); ++b) m(a, b) = entry(rng);
    const WeightedFan img = image_fan(FanMorphism::trusted(x, full_space_fan(rows), m));
    if (img.empty()) ++empty;
    if (!is_balanced(img)) ++bad;
  }
  o.require(bad == 0, std::to_string(bad) + " unbalanced images; ");
  o.note << kPushforwardPairs << " pairs (" << empty << " empty images), " << since(t) << " s";
  o.require(since(t) < kPushforwardBudget, "; over budget");
}

void degrees(Outcome& o) {
  const auto t = Clock::now();
  struct Case {
    std::string name;
    WeightedFan source;
    WeightedFan target;
    IntMat m;
    Rational expect;
  };
  std::vector<Case> corpus;
  for (int n = 1; n <= 3; ++n) {
    const WeightedFan l = WeightedFan::unit(standard_L(1, n));
    corpus.push_back({"id L^1_" + std::to_string(n), l, l, IntMat::Identity(n, n), 1});
  }
  const WeightedFan line = WeightedFan::unit(full_space_fan(1));
  for (int k = 2; k <= 3; ++k) {
    corpus.push_back({"x->" + std::to_string(k) + "x on R", line, line, IntMat::Identity(1, 1) * Integer(k), k});
    const WeightedFan l2 = WeightedFan::unit(standard_L(1, 2));
    corpus.push_back({"x->" + std::to_string(k) + "x on L^1_2", l2, l2, IntMat::Identity(2, 2) * Integer(k), k});
  }
  for (int n = 2; n <= 4; ++n) {
    IntMat p = IntMat::Zero(1, n);
    p(0, 0) = 1;
    corpus.push_back({"projection of L^1_" + std::to_string(n), WeightedFan::unit(standard_L(1, n)), line, p, 1});
  }
  std::uint64_t seed = 1;
  for (const auto& c : corpus) {
    try {
      const auto cert = certify_irreducible(c.target);
      o.require(cert.has_value(), c.name + ": no certificate; ");
      if (!cert) continue;
      const FanMorphism f(c.source, c.target.fan(), c.m, c.target.weights());
      const DegreeResult d = degree(f, *cert, kDegreePoints, seed++);
      o.require(static_cast<int>(d.sums.size()) == kDegreePoints, c.name + ": too few points; ");
      o.require(d.degree == c.expect, c.name + ": degree " + d.degree.str() + "; ");
    } catch (const Error& e) {
      o.require(false, c.name + ": " + e.what() + "; ");
    }
  }
  o.note << (o.pass ? "" : "; ") << corpus.size() << " morphisms x " << kDegreePoints << " points, " << since(t) << " s";
}

void line_counts(Outcome& o) {
  const Degree d = Degree::make(2, {int_vec({-1, 0}), int_vec({0, -1}), int_vec({1, 1})});
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto t = Clock::now();
    const CountResult r = count_generic(all_points(d, 2), seed);
    worst = std::max(worst, since(t));
    o.require(r.unlabeled == 1 && r.group_order == 1, "seed " + std::to_string(seed) + ": " + r.unlabeled.str() + "; ");
    keep(with_points(all_points(d, 2), r.seed), r);
  }
  o.note << (o.pass ? "" : "; ") << "10 seeds, slowest " << worst << " s";
  o.require(worst < kLineCountBudget, "; over budget");
}

void conic_counts(Outcome& o) {
  const auto t = Clock::now();
  const Degree d = Degree::projective(2, 2);
  CountOptions opts;
  opts.threads = std::max(1u, std::thread::hardware_concurrency());
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const CountResult r = count_generic(all_points(d, 5), 100 * seed, 100, opts);
    o.require(r.labeled == 8 && r.group_order == 8 && r.unlabeled == 1,
              "seed " + std::to_string(r.seed) + ": labeled " + r.labeled.str() + "; ");
    o.note << "seed " << r.seed << ": " << r.labeled << "/" << r.group_order << ", ";
    keep(with_points(all_points(d, 5), r.seed), r);
  }
  o.note << since(t) << " s on " << opts.threads << " thread(s)";
  o.require(since(t) < kConicBudget, "; over budget");
}

void space_lines(Outcome& o) {
  const std::vector<IntMat> dirs = {int_mat({{1}, {0}, {0}}), int_mat({{0}, {1}, {0}}), int_mat({{0}, {0}, {1}}),
                                    int_mat({{1}, {1}, {1}}), int_mat({{1}, {1}, {0}})};
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CountProblem p{Degree::projective(3, 1), 4, {}, {}};
    for (int i = 1; i <= 4; ++i)
      p.constraints.push_back(Constraint::on_subspace(
          i, RatVec::Zero(3), dirs[static_cast<std::size_t>(i - 1 + static_cast<int>(seed) - 1) % dirs.size()]));
    const auto t = Clock::now();
    const CountResult r = count_generic(p, seed);
    worst = std::max(worst, since(t));
    o.require(r.labeled == 2, "seed " + std::to_string(seed) + ": " + r.labeled.str() + "; ");
    keep(with_points(p, r.seed), r);
  }
  o.note << (o.pass ? "" : "; ") << "5 seeds, slowest " << worst << " s";
  o.require(worst < kSpaceLinesBudget, "; over budget");
}

void cross_ratio(Outcome& o) {
  const auto t = Clock::now();
  const Degree d = Degree::make(2, {int_vec({-1, 0}), int_vec({0, -1}), int_vec({1, 1})});
  std::vector<Rational> seen;
  for (Split ray : {Split{0b0011}, Split{0b0101}, Split{0b1001}})
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      CountProblem p{d,
                     4,
                     {Constraint::at_point(1, RatVec::Zero(2)), Constraint::at_point(2, RatVec::Zero(2)),
                      Constraint::on_subspace(3, RatVec::Zero(2), int_mat({{0}, {1}}))},
                     CrossRatio{ray, Rational(500 + 77 * static_cast<long>(seed))}};
      seen.push_back(count_generic(p, seed).labeled);
    }
  const bool equal = std::all_of(seen.begin(), seen.end(), [&](const Rational& x) { return x == seen[0]; });
  o.require(equal, "degrees differ; ");
  o.require(seen[0] == kCrossRatioDegree, "degree " + seen[0].str() + " differs from the pinned value; ");
  o.note << "degree " << seen[0] << " on 3 rays x 3 seeds, " << since(t) << " s";
  o.require(since(t) < kCrossRatioBudget, "; over budget");
}

void bridge(Outcome& o) {
  const auto t = Clock::now();
  int mismatches = 0;
  for (const auto& [p, s] : g_solutions) {
    try {
      if (lattice_multiplicity_of(p, s) != Rational(s.multiplicity)) ++mismatches;
    } catch (const Error& e) {
      ++mismatches;
      o.note << e.what() << "; ";
    }
  }
  o.require(!g_solutions.empty(), "no solutions recorded; ");
  o.require(mismatches == 0, std::to_string(mismatches) + " mismatches; ");
  o.note << g_solutions.size() << " solutions, " << since(t) << " s";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
  };
  // The bridge runs last since it checks the solutions of 7-9.
  const std::vector<Criterion> order = {
      {1, "balancing of standard fans", balancing},
      {2, "moduli fans M_0,n for n = 4..7", moduli},
      {3, "M_0,4 is the tropical line", line_isomorphism},
      {4, "pushforwards are balanced", pushforwards},
      {5, "degree is independent of the point", degrees},
      {7, "one line through 2 points", line_counts},
      {8, "one conic through 5 points", conic_counts},
      {9, "two lines meet 4 lines in R^3", space_lines},
      {10, "cross-ratio degree invariance", cross_ratio},
      {6, "determinant multiplicity = lattice index", bridge},
  };
  bool all = true;
  for (const auto& c : order) {
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << "  [" << o.note.str() << "]"
              << std::endl;
  }
  return all ? 0 : 1;
}
