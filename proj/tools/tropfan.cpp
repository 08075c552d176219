// Command line front end; every verb prints one JSON document.
#include "tropfan/enumeration.hpp"
#include "tropfan/errors.hpp"
#include "tropfan/json_io.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

using namespace tropfan;

namespace {

enum Exit { Ok = 0, Usage = 1, NotGenericExit = 2, Failure = 3, Violated = 4 };

void emit(const Json& j, const std::string& out = "") {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error(Errc::Parse, "cannot write " + out);
  f << j.dump(2) << "\n";
}

int fan_check(const std::string& path, bool balanced) {
  const WeightedFan w = weighted_fan_from_json(read_json_file(path));
  const Fan& f = w.fan();
  Json j = {{"valid", true},
            {"ambient_rank", f.ambient_rank()},
            {"dim", f.dim()},
            {"cones", f.size()},
            {"maximal", f.maximal().size()},
            {"pure", f.is_pure()},
            {"simplicial", f.is_simplicial()}};
  if (balanced) {
    const BalanceReport rep = is_balanced(w);
    j["balanced"] = rep.balanced;
    if (!rep.balanced) {
      Json gens = Json::array();
      const Cone& tau = f.cone(*rep.tau);
      for (Eigen::Index k = 0; k < tau.rays().rows(); ++k) gens.push_back(to_json(IntVec(tau.rays().row(k).transpose())));
      j["violation"] = {{"rays", gens}, {"residual", to_json(rep.residual)}};
    }
  }
  emit(j);
  return balanced && !j["balanced"].get<bool>() ? Violated : Ok;
}

int fan_image(const std::string& morphism) {
  emit(weighted_fan_to_json(image_fan(morphism_from_json(read_json_file(morphism)))));
  return Ok;
}

int fan_degree(const std::string& morphism, int trials, std::uint64_t seed) {
  const FanMorphism f = morphism_from_json(read_json_file(morphism));
  const auto cert = certify_irreducible(f.weighted_target());
  if (!cert) throw Error(Errc::Precondition, "no irreducibility certificate for the target");
  const DegreeResult d = degree(f, *cert, trials, seed);
  Json points = Json::array(), sums = Json::array();
  for (const auto& p : d.points) points.push_back(to_json(p));
  for (const auto& s : d.sums) sums.push_back(to_json(s));
  emit({{"degree", to_json(d.degree)},
        {"certificate", kind_name(cert->kind)},
        {"seed", seed},
        {"points", points},
        {"sums", sums}});
  return Ok;
}

Json moduli_json(const ModuliFan& m) {
  Json rays = Json::array();
  const auto ray_idx = m.fan.fan().of_dim(1);
  for (std::size_t k = 0; k < ray_idx.size(); ++k)
    rays.push_back({{"split", split_labels(m.ray_splits[k])}, {"vector", to_json(m.fan.markings()[k])}});
  return {{"n", m.space.n()},
          {"dim", m.fan.fan().dim()},
          {"rays", rays},
          {"fan", weighted_fan_to_json(marked_to_weighted(m.fan))}};
}

int moduli_build(int n, const std::string& out) {
  emit(moduli_json(build_m0n(n)), out);
  return Ok;
}

int moduli_stable_maps(int n, int r, const std::string& degree_path, const std::string& out) {
  const Degree delta = degree_from_json(read_json_file(degree_path));
  if (delta.r != r) throw Error(Errc::DimensionMismatch, "--r does not match the degree file");
  const StableMapsFan s = stable_maps_fan(n, delta);
  emit({{"n", n},
        {"r", r},
        {"degree", degree_to_json(delta)},
        {"dim", s.fan.dim()},
        {"maximal", s.fan.fan().maximal().size()},
        {"moduli", moduli_json(s.moduli)},
        {"fan", weighted_fan_to_json(s.fan)}},
       out);
  return Ok;
}

// Runs `trials` seeds and reports whether the unlabeled count agrees.
int run_counts(const CountConfig& cfg, unsigned threads) {
  CountOptions opts;
  opts.threads = threads;
  Json runs = Json::array();
  CountResult first;
  bool invariant = true;
  for (int t = 0; t < std::max(1, cfg.trials); ++t) {
    CountResult res;
    if (cfg.auto_points) {
      res = count_generic(cfg.problem, cfg.seed + 1000 * static_cast<std::uint64_t>(t), 100, opts);
    } else {
      res = count(cfg.problem, opts);
      res.seed = cfg.seed;
    }
    runs.push_back({{"seed", res.seed}, {"labeled", to_json(res.labeled)}, {"unlabeled", to_json(res.unlabeled)}});
    if (t == 0) first = std::move(res);
    else invariant = invariant && res.labeled == first.labeled;
    if (!cfg.auto_points) break;
  }
  Json j = count_result_to_json(first);
  j["trials"] = runs;
  j["invariant"] = invariant;
  emit(j);
  return invariant ? Ok : Violated;
}

int count_curves(int r, const std::string& degree_path, const std::string& points, int n,
                 std::uint64_t seed, int trials, unsigned threads) {
  CountConfig cfg;
  cfg.problem.delta = degree_from_json(read_json_file(degree_path));
  if (cfg.problem.delta.r != r) throw Error(Errc::DimensionMismatch, "--r does not match the degree file");
  const int m = static_cast<int>(cfg.problem.delta.size());
  if (n <= 0) {
    // all point conditions: r + n + m - 3 = n r
    if (r < 2 || (r + m - 3) % (r - 1) != 0)
      throw Error(Errc::DimensionMismatch, "no number of points balances this degree; pass --n");
    n = (r + m - 3) / (r - 1);
  }
  cfg.problem.n = n;
  cfg.seed = seed;
  cfg.trials = trials;
  if (points == "auto") {
    cfg.problem.constraints = sample_generic_constraints(r, cfg.problem.delta, n, seed);
  } else {
    const Json pts = read_json_file(points);
    for (std::size_t i = 0; i < pts.size(); ++i)
      cfg.problem.constraints.push_back(pts[i].is_object()
                                            ? constraint_from_json(pts[i], r)
                                            : Constraint::at_point(static_cast<int>(i) + 1, rat_vec_from_json(pts[i])));
    cfg.auto_points = false;
  }
  return run_counts(cfg, threads);
}

int count_kontsevich(const std::string& config, unsigned threads) {
  const CountConfig cfg = count_config_from_json(read_json_file(config));
  if (!cfg.problem.cross_ratio) throw Error(Errc::WrongDimension, "config has no cross_ratio");
  return run_counts(cfg, threads);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact tropical fans, moduli of tropical curves and curve counts"};
  app.require_subcommand(1);

  auto* fan = app.add_subcommand("fan", "fans and morphisms")->require_subcommand(1);
  std::string fan_file, morphism_file;
  bool balanced = false;
  int trials = 10;
  std::uint64_t seed = 1;
  auto* check = fan->add_subcommand("check", "validate a fan file");
  check->add_option("file", fan_file, "weighted fan JSON")->required()->check(CLI::ExistingFile);
  check->add_flag("--balanced", balanced, "also check the balancing condition");
  auto* image = fan->add_subcommand("image", "image fan of a morphism");
  image->add_option("--morphism", morphism_file, "morphism JSON")->required()->check(CLI::ExistingFile);
  auto* deg = fan->add_subcommand("degree", "degree of a morphism onto an irreducible target");
  deg->add_option("--morphism", morphism_file, "morphism JSON")->required()->check(CLI::ExistingFile);
  deg->add_option("--trials", trials, "generic points")->check(CLI::PositiveNumber);
  deg->add_option("--seed", seed, "random seed");

  auto* moduli = app.add_subcommand("moduli", "moduli fans")->require_subcommand(1);
  int n = 0, r = 2;
  std::string out, degree_file;
  auto* build = moduli->add_subcommand("build", "build M_{0,n}");
  build->add_option("--n", n, "number of labels")->required()->check(CLI::Range(4, 12));
  build->add_option("--out", out, "output file (stdout if omitted)");
  auto* maps = moduli->add_subcommand("stable-maps", "the fan of labeled curves in R^r");
  maps->add_option("--n", n, "contracted ends")->required()->check(CLI::NonNegativeNumber);
  maps->add_option("--r", r, "ambient dimension")->required()->check(CLI::PositiveNumber);
  maps->add_option("--degree", degree_file, "degree JSON")->required()->check(CLI::ExistingFile);
  maps->add_option("--out", out, "output file (stdout if omitted)");

  auto* cnt = app.add_subcommand("count", "curve counts")->require_subcommand(1);
  std::string points = "auto", config;
  unsigned threads = 1;
  int trials_count = 1;
  auto* curves = cnt->add_subcommand("curves", "curves through points");
  curves->add_option("--r", r, "ambient dimension")->required()->check(CLI::PositiveNumber);
  curves->add_option("--degree", degree_file, "degree JSON")->required()->check(CLI::ExistingFile);
  curves->add_option("--points", points, "\"auto\" or a JSON list of points/constraints");
  curves->add_option("--n", n, "contracted ends (default: balance with points)");
  curves->add_option("--seed", seed, "random seed");
  curves->add_option("--trials", trials_count, "independent seeds to compare")->check(CLI::PositiveNumber);
  curves->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  auto* kont = cnt->add_subcommand("kontsevich", "degree with a cross-ratio condition");
  kont->add_option("--config", config, "config JSON")->required()->check(CLI::ExistingFile);
  kont->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return fan_check(fan_file, balanced);
    if (image->parsed()) return fan_image(morphism_file);
    if (deg->parsed()) return fan_degree(morphism_file, trials, seed);
    if (build->parsed()) return moduli_build(n, out);
    if (maps->parsed()) return moduli_stable_maps(n, r, degree_file, out);
    if (curves->parsed()) return count_curves(r, degree_file, points, n, seed, trials_count, threads);
    if (kont->parsed()) return count_kontsevich(config, threads);
  } catch (const Error& e) {
    emit({{"error", errc_name(e.code())}, {"message", e.what()}});
    const bool generic = e.code() == Errc::NotGeneric || e.code() == Errc::RetriesExhausted;
    return generic ? NotGenericExit : e.code() == Errc::Parse ? Usage : Failure;
  } catch (const Json::exception& e) {
    emit({{"error", "Parse"}, {"message", e.what()}});
    return Usage;
  }
  return Usage;
}
