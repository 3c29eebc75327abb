#include "fil/json_io.hpp"

#include <fstream>

#include "fil/error.hpp"

namespace fil::json_io {
namespace {

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::InvalidArgument, message);
}

const Json& field(const Json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) invalid(std::string("missing field '") + key + "'");
  return *it;
}

std::string text(const Json& value, const char* what) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return value.dump();
  invalid(std::string(what) + " must be a string or an integer");
}

Rational rational_value(const Json& value) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_integer()) return parse_rational(value.dump());
  if (value.is_number_float()) return rational_from_double(value.get<double>());
  invalid("expected a number or a rational string");
}

double double_value(const Json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    if (s == "+inf" || s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return to_double(parse_rational(s));
  }
  invalid("expected a number");
}

std::vector<std::string> labels_of(const Json& doc) {
  const Json& labels = field(doc, "labels");
  if (!labels.is_array()) invalid("'labels' must be an array");
  std::vector<std::string> out;
  for (const auto& l : labels) out.push_back(text(l, "label"));
  return out;
}

LabelSpace space_of(const Json& doc) {
  const Structure structure =
      parse_structure(doc.contains("structure") ? field(doc, "structure").get<std::string>()
                                                : "unordered");
  std::vector<std::string> labels = labels_of(doc);
  if (structure == Structure::Unordered) return LabelSpace::unordered(std::move(labels));
  if (structure == Structure::Ordered) return LabelSpace::ordered(std::move(labels));
  std::vector<Rational> values;
  if (doc.contains("numeric_values")) {
    const Json& raw = doc["numeric_values"];
    if (!raw.is_array()) invalid("'numeric_values' must be an array");
    for (const auto& v : raw) values.push_back(rational_value(v));
  } else {
    for (const auto& l : labels) values.push_back(parse_rational(l));
  }
  return LabelSpace::numeric(std::move(labels), std::move(values));
}

Json space_fields(const LabelSpace& space) {
  Json out;
  out["structure"] = std::string(to_string(space.structure()));
  out["labels"] = space.labels();
  if (space.is_numeric()) {
    Json values = Json::array();
    for (const auto& v : space.exact_values()) values.push_back(rational_string(v));
    out["numeric_values"] = values;
  }
  return out;
}

SimpleDistribution parse_simple(const Json& doc) {
  const Json& freq = field(doc, "freq");
  if (!freq.is_array()) invalid("'freq' must be an array");
  std::vector<std::int64_t> counts;
  for (const auto& f : freq) {
    if (!f.is_number_integer()) {
      throw Error(ErrorCode::InvalidFrequency, "frequencies must be integers");
    }
    counts.push_back(f.get<std::int64_t>());
  }
  return make_simple(space_of(doc), counts);
}

DiscreteDistribution parse_discrete_probs(const Json& doc) {
  LabelSpace space = space_of(doc);
  const Json& probs = field(doc, "probs");
  if (!probs.is_array()) invalid("'probs' must be an array");
  std::vector<Rational> exact;
  std::vector<double> approx;
  bool all_exact = true;
  for (const auto& p : probs) {
    if (p.is_object()) {
      if (p.contains("rational")) {
        exact.push_back(parse_rational(p["rational"].get<std::string>()));
        approx.push_back(to_double(exact.back()));
      } else {
        all_exact = false;
        approx.push_back(double_value(field(p, "decimal")));
      }
    } else if (p.is_string()) {
      exact.push_back(parse_rational(p.get<std::string>()));
      approx.push_back(to_double(exact.back()));
    } else if (p.is_number()) {
      all_exact = false;
      approx.push_back(p.get<double>());
    } else {
      throw Error(ErrorCode::InvalidProbability, "probabilities must be numbers or strings");
    }
  }
  if (approx.size() != space.size()) {
    throw Error(ErrorCode::ShapeMismatch, "probs must have one entry per label");
  }
  if (all_exact) {
    std::optional<BigInt> denominator;
    if (doc.contains("denominator")) {
      denominator = BigInt(text(doc["denominator"], "denominator"));
    }
    return DiscreteDistribution::exact(std::move(space), std::move(exact), denominator);
  }
  return DiscreteDistribution::approximate(std::move(space), std::move(approx));
}

ContinuousDistribution parse_continuous(const Json& doc) {
  const std::string family = field(doc, "family").get<std::string>();
  const Json params = doc.contains("params") ? doc["params"] : Json::object();
  auto param = [&](const char* key, std::optional<double> fallback = std::nullopt) {
    if (params.contains(key)) return double_value(params[key]);
    if (fallback) return *fallback;
    invalid(std::string("continuous family '") + family + "' needs parameter '" + key + "'");
  };
  if (family == "normal") return ContinuousDistribution::normal(param("mean", 0.0), param("sd", 1.0));
  if (family == "exponential") return ContinuousDistribution::exponential(param("rate", 1.0));
  if (family == "uniform") return ContinuousDistribution::uniform(param("lower", 0.0), param("upper", 1.0));
  invalid("unknown continuous family '" + family + "'");
}

}  // namespace

Json real(double x) { return decimal17(x); }

Json prob(const Prob& p, const std::optional<BigInt>& denominator) {
  Json out;
  out["decimal"] = decimal17(p.value);
  if (p.exact) {
    out["rational"] =
        denominator ? rational_string_over(*p.exact, *denominator) : rational_string(*p.exact);
  }
  return out;
}

Json to_json(const SimpleDistribution& dist) {
  Json out;
  out["kind"] = "simple";
  out.update(space_fields(dist.space()));
  out["freq"] = dist.frequencies();
  out["population_size"] = dist.population_size();
  return out;
}

Json to_json(const DiscreteDistribution& dist) {
  Json out;
  out["kind"] = "discrete";
  out.update(space_fields(dist.space()));
  Json probs = Json::array();
  for (std::size_t i = 0; i < dist.size(); ++i) {
    probs.push_back(prob(dist.prob(i), dist.denominator()));
  }
  out["probs"] = probs;
  if (dist.denominator()) out["denominator"] = dist.denominator()->str();
  return out;
}

Json to_json(const ContinuousDistribution& dist) {
  Json out;
  out["kind"] = "continuous";
  out["family"] = dist.name();
  Json params = Json::object();
  for (const auto& [k, v] : dist.params()) params[k] = real(v);
  out["params"] = params;
  return out;
}

Json to_json(const SamplingDistribution& sampling) {
  Json out = to_json(sampling.dist);
  Json provenance;
  provenance["base"] = sampling.provenance.base;
  provenance["n"] = sampling.provenance.n;
  provenance["mode"] = std::string(to_string(sampling.provenance.mode));
  provenance["outcome_count"] = sampling.provenance.outcome_count
                                    ? Json(sampling.provenance.outcome_count->str())
                                    : Json(nullptr);
  out["provenance"] = provenance;
  return out;
}

Json to_json(const Bag& bag) {
  Json out;
  out["kind"] = "bag";
  out.update(space_fields(bag.space()));
  Json pairs = Json::array();
  for (const auto& p : bag.pairs()) pairs.push_back(Json::array({p.label, p.index}));
  out["pairs"] = pairs;
  return out;
}

Json to_json(const TailAreaReport& report, const std::optional<BigInt>& denominator) {
  Json out;
  out["left"] = prob(report.left, denominator);
  out["right"] = prob(report.right, denominator);
  out["two_sided"] = prob(report.two_sided, denominator);
  // The percentile is 100 * left and is not a probability over the denominator.
  out["percentile"] = prob(report.percentile);
  return out;
}

Json to_json(const ReductioResult& result, const std::optional<BigInt>& denominator) {
  Json out;
  out["verdict"] = std::string(to_string(result.verdict));
  out["tail_area"] = result.tail_area ? prob(*result.tail_area, denominator) : Json(nullptr);
  out["alpha"] = real(result.alpha);
  out["side"] = std::string(to_string(result.side));
  out["disjunction"] = result.disjunction;
  return out;
}

Json to_json(const std::vector<LevelSet>& partition) {
  Json out = Json::array();
  for (const auto& level : partition) {
    Json entry;
    entry["t"] = real(level.t);
    entry["labels"] = level.labels;
    entry["probability"] = prob(level.probability);
    out.push_back(entry);
  }
  return out;
}

Json to_json(const ConfidenceRegion& region, bool diagnostics) {
  Json out;
  out["alpha"] = real(region.alpha);
  out["side"] = std::string(to_string(region.side));
  Json intervals = Json::array();
  for (const auto& iv : region.intervals) {
    intervals.push_back(Json::array({real(iv.lower), real(iv.upper)}));
  }
  out["intervals"] = intervals;
  out["complement_nonempty"] = region.complement_nonempty;
  if (diagnostics) {
    Json grid = Json::array();
    for (const auto& g : region.grid) {
      grid.push_back({{"theta", real(g.theta)}, {"tail", real(g.tail)}, {"inside", g.inside}});
    }
    Json crossings = Json::array();
    for (const auto& c : region.crossings) {
      crossings.push_back({{"outside_theta", real(c.outside_theta)},
                           {"inside_theta", real(c.inside_theta)},
                           {"boundary", real(c.boundary)}});
    }
    out["diagnostics"] = {{"grid", grid}, {"crossings", crossings}};
  }
  return out;
}

Json to_json(const AssessmentReport& report) {
  Json out;
  out["estimator"] = report.estimator;
  out["family"] = report.family;
  out["n"] = report.n;
  Json records = Json::array();
  for (const auto& r : report.records) {
    Json rec;
    rec["theta"] = real(r.theta);
    rec["theta_rational"] = r.exact_theta ? Json(rational_string(*r.exact_theta)) : Json(nullptr);
    rec["mean"] = prob(r.mean);
    rec["bias"] = prob(r.bias);
    rec["variance"] = prob(r.variance);
    rec["mse"] = prob(r.mse);
    rec["fisher_info"] = real(r.fisher_info);
    rec["lambda_info"] = r.lambda_info ? real(*r.lambda_info) : Json(nullptr);
    rec["efficiency"] = r.efficiency ? real(*r.efficiency) : Json(nullptr);
    records.push_back(rec);
  }
  out["records"] = records;
  return out;
}

Json to_json(const InvarianceReport& report) {
  Json out;
  out["transform"] = report.transform;
  out["original"] = to_json(report.original);
  out["transformed"] = to_json(report.transformed);
  Json eff = Json::array();
  for (const auto& e : report.reparameterized_efficiency) {
    eff.push_back(e ? real(*e) : Json(nullptr));
  }
  out["reparameterized_efficiency"] = eff;
  out["flagged"] = report.flagged;
  return out;
}

AnyDistribution parse_distribution(const Json& doc) {
  if (!doc.is_object()) invalid("distribution document must be a JSON object");
  if (!doc.contains("kind") && doc.contains("distribution")) {
    return parse_distribution(doc["distribution"]);
  }
  const std::string kind = field(doc, "kind").get<std::string>();
  if (kind == "simple") return parse_simple(doc);
  if (kind == "discrete") return parse_discrete_probs(doc);
  if (kind == "continuous") return parse_continuous(doc);
  invalid("unknown distribution kind '" + kind + "'");
}

DiscreteDistribution parse_discrete(const Json& doc) {
  AnyDistribution any = parse_distribution(doc);
  if (auto* simple = std::get_if<SimpleDistribution>(&any)) return simple->to_discrete();
  if (auto* discrete = std::get_if<DiscreteDistribution>(&any)) return *discrete;
  invalid("a discrete distribution is required here");
}

Bag parse_bag(const Json& doc) {
  if (doc.is_object() && doc.value("kind", "") == "bag") {
    const Json& raw = field(doc, "pairs");
    if (!raw.is_array()) invalid("'pairs' must be an array");
    std::vector<BagEntry> pairs;
    for (const auto& p : raw) {
      if (!p.is_array() || p.size() != 2 || !p[1].is_number_unsigned()) {
        invalid("bag pairs are [label, positive index]");
      }
      pairs.push_back({text(p[0], "label"), p[1].get<std::uint64_t>()});
    }
    return Bag(space_of(doc), std::move(pairs));
  }
  AnyDistribution any = parse_distribution(doc);
  if (auto* simple = std::get_if<SimpleDistribution>(&any)) return to_bag(*simple);
  invalid("a bag or simple distribution is required here");
}

Json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    invalid("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

}  // namespace fil::json_io
