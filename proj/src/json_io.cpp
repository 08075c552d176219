#include "tropfan/json_io.hpp"

#include "tropfan/errors.hpp"

#include <fstream>

namespace tropfan {

namespace {

const Integer kExact(9007199254740992LL);  // 2^53

Error parse_error(const std::string& what) { return Error(Errc::Parse, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw parse_error(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

}  // namespace

Json to_json(const Integer& x) {
  if (abs(x) <= kExact) return x.convert_to<long long>();
  return x.str();
}

Json to_json(const Rational& x) { return x.str(); }

Json to_json(const IntVec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

Json to_json(const RatVec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<long long>());
  if (j.is_string()) {
    try {
      return Integer(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw parse_error("expected an integer, got " + j.dump());
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) {
    try {
      return Rational(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw parse_error("expected a rational (integer or \"p/q\"), got " + j.dump());
}

IntVec int_vec_from_json(const Json& j) {
  if (!j.is_array()) throw parse_error("expected an array, got " + j.dump());
  IntVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = integer_from_json(j[i]);
  return v;
}

RatVec rat_vec_from_json(const Json& j) {
  if (!j.is_array()) throw parse_error("expected an array, got " + j.dump());
  RatVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = rational_from_json(j[i]);
  return v;
}

IntMat int_mat_from_json(const Json& rows) {
  if (!rows.is_array() || rows.empty()) throw parse_error("expected a nonempty matrix");
  const std::size_t cols = rows[0].size();
  IntMat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const IntVec r = int_vec_from_json(rows[i]);
    if (static_cast<std::size_t>(r.size()) != cols) throw parse_error("ragged matrix");
    m.row(static_cast<Eigen::Index>(i)) = r.transpose();
  }
  return m;
}

Json fan_to_json(const Fan& f) {
  Json cones = Json::array();
  for (auto i : f.maximal()) {
    const Cone& c = f.cone(i);
    Json gens = Json::array();
    for (Eigen::Index k = 0; k < c.rays().rows(); ++k) gens.push_back(to_json(IntVec(c.rays().row(k).transpose())));
    for (Eigen::Index k = 0; k < c.lineality().rows(); ++k) {
      const IntVec l = c.lineality().row(k).transpose();
      gens.push_back(to_json(l));
      gens.push_back(to_json(IntVec(-l)));
    }
    cones.push_back({{"generators", gens}});
  }
  return {{"ambient_rank", f.ambient_rank()}, {"cones", cones}};
}

Json weighted_fan_to_json(const WeightedFan& w) {
  Json j = fan_to_json(w.fan());
  Json weights = Json::array();
  for (const auto& x : w.weights()) weights.push_back(to_json(x));
  j["weights"] = weights;
  return j;
}

namespace {

// Cones of the JSON in file order, and the fan they generate.
std::pair<std::vector<Cone>, Fan> read_cones(const Json& j) {
  const Json& amb = field(j, "ambient_rank");
  if (!amb.is_number_integer() || amb.get<long long>() < 0) throw parse_error("bad ambient_rank");
  const Eigen::Index n = amb.get<Eigen::Index>();
  std::vector<Cone> cones;
  for (const auto& c : field(j, "cones")) {
    std::vector<IntVec> gens;
    for (const auto& g : field(c, "generators")) {
      gens.push_back(int_vec_from_json(g));
      if (gens.back().size() != n) throw parse_error("generator of the wrong length");
    }
    cones.push_back(gens.empty() ? Cone::origin(n) : Cone::from_generators(gens, n));
  }
  Fan f = Fan::from_cones(cones, n);
  return {std::move(cones), std::move(f)};
}

}  // namespace

Fan fan_from_json(const Json& j) { return read_cones(j).second; }

WeightedFan weighted_fan_from_json(const Json& j) {
  auto [cones, f] = read_cones(j);
  if (!j.contains("weights")) return WeightedFan::unit(std::move(f));
  const Json& w = j.at("weights");
  if (!w.is_array() || w.size() != cones.size())
    throw parse_error("weights must align with the listed cones");
  // Listed cones are matched to maximal cones by their point sets.
  std::vector<Integer> weights(f.maximal().size(), Integer(0));
  for (std::size_t k = 0; k < cones.size(); ++k) {
    const auto idx = f.find(cones[k]);
    const auto pos = std::find(f.maximal().begin(), f.maximal().end(), *idx);
    if (pos == f.maximal().end()) throw parse_error("a weighted cone is not maximal");
    weights[static_cast<std::size_t>(pos - f.maximal().begin())] = integer_from_json(w[k]);
  }
  return WeightedFan(std::move(f), std::move(weights));
}

FanMorphism morphism_from_json(const Json& j) {
  const WeightedFan src = weighted_fan_from_json(field(j, "source"));
  const Json& tj = field(j, "target");
  const WeightedFan tgt = weighted_fan_from_json(tj);
  const IntMat m = int_mat_from_json(field(j, "matrix"));
  if (!tj.contains("weights")) return FanMorphism(src, tgt.fan(), m);
  return FanMorphism(src, tgt.fan(), m, tgt.weights());
}

Json morphism_to_json(const FanMorphism& f) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < f.matrix().rows(); ++i) rows.push_back(to_json(IntVec(f.matrix().row(i).transpose())));
  return {{"matrix", rows},
          {"source", weighted_fan_to_json(f.source())},
          {"target", weighted_fan_to_json(f.weighted_target())}};
}

Json degree_to_json(const Degree& d) {
  Json e = Json::array();
  for (const auto& v : d.entries) e.push_back(to_json(v));
  return {{"r", d.r}, {"entries", e}};
}

Degree degree_from_json(const Json& j) {
  const int r = field(j, "r").get<int>();
  std::vector<IntVec> entries;
  for (const auto& e : field(j, "entries")) {
    entries.push_back(int_vec_from_json(e));
    if (entries.back().size() != r) throw parse_error("degree entry of the wrong length");
  }
  return Degree::make(r, std::move(entries));
}

Json constraint_to_json(const Constraint& c) {
  Json j = {{"end", c.end}, {"point", to_json(c.point)}};
  if (c.directions.cols() > 0) {
    Json d = Json::array();
    for (Eigen::Index k = 0; k < c.directions.cols(); ++k) d.push_back(to_json(IntVec(c.directions.col(k))));
    j["directions"] = d;
  }
  return j;
}

namespace {

IntMat directions_from_json(const Json& j, Eigen::Index r) {
  if (!j.contains("directions")) return IntMat(r, 0);
  const Json& d = j.at("directions");
  IntMat m(r, static_cast<Eigen::Index>(d.size()));
  for (std::size_t k = 0; k < d.size(); ++k) {
    const IntVec v = int_vec_from_json(d[k]);
    if (v.size() != r) throw parse_error("direction of the wrong length");
    m.col(static_cast<Eigen::Index>(k)) = v;
  }
  return m;
}

}  // namespace

Constraint constraint_from_json(const Json& j, Eigen::Index r) {
  const int end = field(j, "end").get<int>();
  const Json& p = field(j, "point");
  const RatVec point = p.is_string() && p.get<std::string>() == "auto" ? RatVec(RatVec::Zero(r)) : rat_vec_from_json(p);
  if (point.size() != r) throw parse_error("constraint point of the wrong length");
  const IntMat dirs = directions_from_json(j, r);
  return dirs.cols() == 0 ? Constraint::at_point(end, point) : Constraint::on_subspace(end, point, dirs);
}

CountConfig count_config_from_json(const Json& j) {
  CountConfig c;
  c.problem.delta = degree_from_json(field(j, "degree"));
  c.problem.n = field(j, "n").get<int>();
  c.auto_points = false;
  for (const auto& k : field(j, "constraints")) {
    c.problem.constraints.push_back(constraint_from_json(k, c.problem.delta.r));
    const Json& p = k.at("point");
    if (p.is_string() && p.get<std::string>() == "auto") c.auto_points = true;
  }
  if (j.contains("cross_ratio")) {
    const Json& x = j.at("cross_ratio");
    Split s = 0;
    for (const auto& l : field(x, "split")) s |= label_bit(l.get<int>());
    c.problem.cross_ratio = CrossRatio{canonical_split(s, 4), rational_from_json(field(x, "length"))};
  }
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("trials")) c.trials = j.at("trials").get<int>();
  return c;
}

Json solution_to_json(const CurveSolution& s) {
  Json splits = Json::array(), lengths = Json::array();
  for (std::size_t e = 0; e < s.curve.type.splits.size(); ++e) {
    splits.push_back(split_labels(s.curve.type.splits[e]));
    lengths.push_back(to_json(s.curve.lengths[e]));
  }
  return {{"splits", splits},
          {"lengths", lengths},
          {"root", to_json(s.root)},
          {"multiplicity", to_json(s.multiplicity)}};
}

Json count_result_to_json(const CountResult& r) {
  Json sols = Json::array();
  for (const auto& s : r.solutions) sols.push_back(solution_to_json(s));
  return {{"labeled", to_json(r.labeled)},
          {"group_order", to_json(r.group_order)},
          {"unlabeled", to_json(r.unlabeled)},
          {"seed", r.seed},
          {"types_checked", r.types_checked},
          {"solutions", sols}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw parse_error(path + ": " + e.what());
  }
}

}  // namespace tropfan
