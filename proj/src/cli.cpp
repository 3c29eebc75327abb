#include "fil/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>

#include <CLI11.hpp>

#include "fil/error.hpp"
#include "fil/json_io.hpp"

namespace fil::cli {
namespace {

using json_io::Json;

using FamilyArgs = std::vector<std::pair<std::string, std::string>>;

FamilyArgs split_args(const std::vector<std::string>& raw) {
  FamilyArgs out;
  for (const auto& token : raw) {
    std::size_t start = 0;
    while (start <= token.size()) {
      std::size_t end = token.find(',', start);
      if (end == std::string::npos) end = token.size();
      const std::string item = token.substr(start, end - start);
      if (!item.empty()) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw Error(ErrorCode::InvalidArgument, "family argument '" + item + "' is not key=value");
        }
        out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
      }
      start = end + 1;
    }
  }
  return out;
}

unsigned sample_size(const FamilyArgs& args) {
  for (const auto& [k, v] : args) {
    if (k != "n") continue;
    const Rational n = parse_rational(v);
    if (n < 1 || denominator(n) != 1 || n > 1'000'000) {
      throw Error(ErrorCode::InvalidArgument, "n must be a positive integer");
    }
    return static_cast<unsigned>(numerator(n));
  }
  return 1;
}

std::vector<Rational> parse_grid(const std::string& text) {
  std::vector<Rational> grid;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) grid.push_back(parse_rational(text.substr(start, end - start)));
    start = end + 1;
  }
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "grid is empty");
  return grid;
}

double parse_real(const std::string& text) { return to_double(parse_rational(text)); }

std::uint64_t enumeration_budget() {
  const char* raw = std::getenv("FIL_ENUM_BUDGET");
  if (raw == nullptr || *raw == '\0') return EnumerationOptions{}.budget;
  const Rational value = parse_rational(raw);
  if (value < 1 || denominator(value) != 1) {
    throw Error(ErrorCode::InvalidArgument, "FIL_ENUM_BUDGET must be a positive integer");
  }
  if (value > std::numeric_limits<std::uint64_t>::max()) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(numerator(value));
}

Json provenance(bool exact) {
  return {{"engine", "fil " + std::string(kEngineVersion)}, {"exact", exact}};
}

Json payload(std::string_view command) {
  Json out;
  out["command"] = std::string(command);
  return out;
}

void emit(std::ostream& out, Json doc, bool exact) {
  doc["provenance"] = provenance(exact);
  out << doc.dump(2) << '\n';
}

void emit_error(std::ostream& err, std::string_view code, const std::string& message) {
  Json doc;
  doc["error"] = {{"code", std::string(code)}, {"message", message}};
  err << doc.dump() << '\n';
}

// ---------------------------------------------------------------------------

struct LotteryArgs {
  unsigned sides = 0;
  unsigned draws = 0;
  std::string first = "0";
  std::optional<std::string> observed;
  double alpha = 0.05;
  std::string side = "right";
};

void lottery(const LotteryArgs& a, std::ostream& out) {
  if (a.sides < 1 || a.draws < 1) {
    throw Error(ErrorCode::InvalidArgument, "--sides and --draws must be >= 1");
  }
  const Rational first_face = parse_rational(a.first);
  if (denominator(first_face) != 1) {
    throw Error(ErrorCode::InvalidArgument, "--first must be an integer");
  }
  const auto lo = static_cast<std::int64_t>(numerator(first_face));
  const auto hi = lo + static_cast<std::int64_t>(a.sides) - 1;
  const DiscreteDistribution base = DiscreteDistribution::exact(
      LabelSpace::integers(lo, hi), std::vector<Rational>(a.sides, Rational(1, a.sides)),
      BigInt(a.sides));
  const std::string base_id =
      "uniform{" + std::to_string(lo) + ".." + std::to_string(hi) + "}";
  const SamplingDistribution sums = iid_sum_distribution(base, a.draws, base_id);

  Json doc = payload("lottery");
  doc["distribution"] = json_io::to_json(sums);
  if (a.observed) {
    const Side side = parse_side(a.side);
    const Rational x = parse_rational(*a.observed);
    doc["observed"] = numeric_label(x);
    doc["tail"] = json_io::to_json(tail_report(sums.dist, x), sums.dist.denominator());
    doc["test"] = json_io::to_json(reductio_test(sums.dist, x, a.alpha, side),
                                   sums.dist.denominator());
  }
  emit(out, std::move(doc), true);
}

struct TailArgs {
  std::string dist;
  std::string at;
};

void tail(const TailArgs& a, std::ostream& out) {
  const auto any = json_io::parse_distribution(json_io::read_file(a.dist));
  Json doc = payload("tail");
  doc["at"] = a.at;
  bool exact = false;
  if (const auto* cont = std::get_if<ContinuousDistribution>(&any)) {
    doc["tail"] = json_io::to_json(tail_report(*cont, parse_real(a.at)));
  } else {
    const DiscreteDistribution dist = std::holds_alternative<SimpleDistribution>(any)
                                          ? std::get<SimpleDistribution>(any).to_discrete()
                                          : std::get<DiscreteDistribution>(any);
    const TailAreaReport report = dist.space().index_of(a.at) || !dist.space().is_numeric()
                                      ? tail_report_label(dist, a.at)
                                      : tail_report(dist, parse_rational(a.at));
    exact = report.left.is_exact();
    doc["tail"] = json_io::to_json(report, dist.denominator());
  }
  emit(out, std::move(doc), exact);
}

struct TestArgs {
  std::string null_file;
  std::optional<std::string> alt_file;
  std::string observed;
  double alpha = 0.05;
  std::string side = "right";
};

void test(const TestArgs& a, std::ostream& out) {
  const auto any = json_io::parse_distribution(json_io::read_file(a.null_file));
  const Side side = parse_side(a.side);
  Json doc = payload("test");
  doc["observed"] = a.observed;
  bool exact = false;
  if (const auto* cont = std::get_if<ContinuousDistribution>(&any)) {
    if (a.alt_file) {
      throw Error(ErrorCode::InvalidArgument, "--alt needs a discrete null distribution");
    }
    doc["ordering"] = "identity";
    doc["result"] = json_io::to_json(reductio_test(*cont, parse_real(a.observed), a.alpha, side));
  } else {
    const DiscreteDistribution null_dist =
        std::holds_alternative<SimpleDistribution>(any)
            ? std::get<SimpleDistribution>(any).to_discrete()
            : std::get<DiscreteDistribution>(any);
    TestStatistic order = TestStatistic::identity();
    if (a.alt_file) {
      order = likelihood_ratio_order(null_dist, json_io::parse_discrete(json_io::read_file(*a.alt_file)));
    }
    doc["ordering"] = order.name;
    const ReductioResult result = reductio_test_label(null_dist, a.observed, a.alpha, side, order);
    exact = !result.tail_area || result.tail_area->is_exact();
    doc["result"] = json_io::to_json(result, null_dist.denominator());
  }
  emit(out, std::move(doc), exact);
}

struct ConfintArgs {
  std::string family;
  std::vector<std::string> args;
  std::string obs;
  double alpha = 0.05;
  std::string side = "two";
  std::size_t grid_points = 512;
  bool no_diagnostics = false;
  bool serial = false;
};

void confint(const ConfintArgs& a, std::ostream& out) {
  const FamilyArgs args = split_args(a.args);
  const FamilyPtr family = make_family(a.family, args);
  const Sample sample{parse_real(a.obs), sample_size(args)};
  RegionOptions options;
  options.side = parse_side(a.side);
  options.grid_points = a.grid_points;
  options.parallel = !a.serial;
  const ConfidenceRegion region =
      confidence_region(*family, sample, a.alpha, GeneralizedEstimator::canonical(), options);
  Json doc = payload("confint");
  doc["family"] = family->name();
  doc["parameter"] = family->parameter_name();
  doc["statistic"] = family->statistic_name();
  doc["observed"] = json_io::real(sample.statistic);
  doc["n"] = sample.n;
  doc["region"] = json_io::to_json(region, !a.no_diagnostics);
  emit(out, std::move(doc), false);
}

struct InfoArgs {
  std::vector<std::string> kl;
  std::string entropy;
  std::vector<std::string> fisher;
  std::vector<std::string> lambda;
  std::vector<std::string> args;
  std::string estimator = "natural";
};

void info(const InfoArgs& a, std::ostream& out) {
  const int chosen = !a.kl.empty() + !a.entropy.empty() + !a.fisher.empty() + !a.lambda.empty();
  if (chosen != 1) {
    throw Error(ErrorCode::InvalidArgument,
                "info needs exactly one of --kl, --entropy, --fisher, --lambda");
  }
  Json doc = payload("info");
  if (!a.kl.empty()) {
    const auto m1 = json_io::parse_discrete(json_io::read_file(a.kl[0]));
    const auto m2 = json_io::parse_discrete(json_io::read_file(a.kl[1]));
    doc["kl"] = {{"value", json_io::real(kl_divergence(m1, m2))}, {"units", "nats"}};
  } else if (!a.entropy.empty()) {
    const auto m = json_io::parse_discrete(json_io::read_file(a.entropy));
    doc["entropy"] = {{"value", json_io::real(entropy(m))}, {"units", "nats"}};
  } else {
    const auto& call = a.fisher.empty() ? a.lambda : a.fisher;
    const FamilyArgs args = split_args(a.args);
    const FamilyPtr family = make_family(call[0], args);
    const double theta = parse_real(call[1]);
    const Rational n_value = parse_rational(call[2]);
    if (n_value < 1 || denominator(n_value) != 1 || n_value > 1'000'000) {
      throw Error(ErrorCode::InvalidArgument, "n must be a positive integer");
    }
    const auto n = static_cast<unsigned>(numerator(n_value));
    const double fisher = fisher_information(*family, theta, n);
    Json block = {{"family", family->name()}, {"theta", json_io::real(theta)}, {"n", n},
                  {"fisher_info", json_io::real(fisher)}};
    if (!a.fisher.empty()) {
      doc["fisher"] = block;
    } else {
      const Estimator t = registered_estimator(a.estimator, *family, n);
      const double lambda = lambda_info(GeneralizedEstimator::from(t), *family, theta, n);
      block["estimator"] = t.name;
      block["lambda_info"] = json_io::real(lambda);
      block["efficiency"] = json_io::real(lambda / fisher);
      doc["lambda"] = block;
    }
  }
  emit(out, std::move(doc), false);
}

struct PokerArgs {
  std::optional<std::string> at;
  bool serial = false;
};

void poker(const PokerArgs& a, std::ostream& out) {
  const SimpleDistribution hands = poker_rank_distribution(!a.serial);
  const DiscreteDistribution dist = hands.to_discrete();
  Json doc = payload("poker");
  doc["distribution"] = json_io::to_json(hands);
  Json probs = Json::array();
  for (std::size_t i = 0; i < dist.size(); ++i) {
    probs.push_back(json_io::prob(dist.prob(i), dist.denominator()));
  }
  doc["probabilities"] = probs;
  if (a.at) {
    doc["at"] = *a.at;
    doc["tail"] = json_io::to_json(tail_report_label(dist, *a.at), dist.denominator());
  }
  emit(out, std::move(doc), true);
}

struct SampdistArgs {
  std::string bag;
  unsigned n = 0;
  std::string stat = "mean";
  std::string mode = "subsets";
  bool serial = false;
};

void sampdist(const SampdistArgs& a, std::ostream& out) {
  const Bag bag = json_io::parse_bag(json_io::read_file(a.bag));
  EnumerationOptions options;
  options.budget = enumeration_budget();
  options.parallel = !a.serial;
  const SamplingDistribution result =
      finite_population_sampling(bag, a.n, statistics::by_name(a.stat, bag.space()),
                                 parse_sampling_mode(a.mode), options, a.bag);
  Json doc = payload("sampdist");
  doc["statistic"] = a.stat;
  doc["distribution"] = json_io::to_json(result);
  emit(out, std::move(doc), true);
}

struct InvarianceArgs {
  std::string family = "two-point";
  std::vector<std::string> args;
  std::string transform = "reciprocal";
  std::string grid;
  std::optional<std::string> csv;
};

void invariance(const InvarianceArgs& a, std::ostream& out) {
  const FamilyArgs args = split_args(a.args);
  const FamilyPtr family = make_family(a.family, args);
  const unsigned n = sample_size(args);
  AssessOptions options;
  options.budget = enumeration_budget();
  const InvarianceReport report =
      invariance_probe(family->natural_estimator(n), Transform::by_name(a.transform), family, n,
                       parse_grid(a.grid), options);
  if (a.csv) {
    if (*a.csv == "original") {
      out << to_csv(report.original);
      return;
    }
    if (*a.csv == "transformed") {
      out << to_csv(report.transformed);
      return;
    }
    throw Error(ErrorCode::InvalidArgument, "--csv takes original or transformed");
  }
  Json doc = payload("invariance");
  doc["report"] = json_io::to_json(report);
  const bool exact = std::all_of(report.original.records.begin(), report.original.records.end(),
                                 [](const AssessmentRecord& r) { return r.bias.is_exact(); });
  emit(out, std::move(doc), exact);
}

void plotdata(const std::string& file, std::ostream& out) {
  const auto any = json_io::parse_distribution(json_io::read_file(file));
  if (const auto* simple = std::get_if<SimpleDistribution>(&any)) {
    out << to_csv(rectangle_geometry(*simple));
  } else if (const auto* discrete = std::get_if<DiscreteDistribution>(&any)) {
    out << to_csv(rectangle_geometry(*discrete));
  } else {
    throw Error(ErrorCode::InvalidArgument, "plotdata needs a discrete distribution");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact tail areas, reductio tests, confidence regions and information measures",
               "fil"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fil " + std::string(kEngineVersion));

  LotteryArgs lottery_args;
  auto* lottery_cmd = app.add_subcommand("lottery", "Sum of draws from a fair die; optional test");
  lottery_cmd->add_option("--sides", lottery_args.sides, "Number of faces")->required();
  lottery_cmd->add_option("--draws", lottery_args.draws, "Number of draws")->required();
  lottery_cmd->add_option("--first", lottery_args.first, "Value of the lowest face");
  lottery_cmd->add_option("--observed", lottery_args.observed, "Observed sum");
  lottery_cmd->add_option("--alpha", lottery_args.alpha, "Rarity level");
  lottery_cmd->add_option("--side", lottery_args.side, "right, left or two");

  TailArgs tail_args;
  auto* tail_cmd = app.add_subcommand("tail", "Tail areas at a point");
  tail_cmd->add_option("--dist", tail_args.dist, "Distribution JSON")->required();
  tail_cmd->add_option("--at", tail_args.at, "Point or label")->required();

  TestArgs test_args;
  auto* test_cmd = app.add_subcommand("test", "Reductio test of a null distribution");
  test_cmd->add_option("--null", test_args.null_file, "Null distribution JSON")->required();
  test_cmd->add_option("--alt", test_args.alt_file,
                       "Alternative distribution; orders outcomes by likelihood ratio");
  test_cmd->add_option("--observed", test_args.observed, "Observed value or label")->required();
  test_cmd->add_option("--alpha", test_args.alpha, "Rarity level")->required();
  test_cmd->add_option("--side", test_args.side, "right, left or two");

  ConfintArgs confint_args;
  auto* confint_cmd = app.add_subcommand("confint", "Confidence region by tail-area inversion");
  confint_cmd->add_option("--family", confint_args.family, "binomial, poisson, normal-mean, two-point")
      ->required();
  confint_cmd->add_option("--args", confint_args.args, "key=value family arguments, e.g. n=10");
  confint_cmd->add_option("--obs", confint_args.obs, "Observed sample statistic")->required();
  confint_cmd->add_option("--alpha", confint_args.alpha, "Rarity level");
  confint_cmd->add_option("--side", confint_args.side, "right, left or two");
  confint_cmd->add_option("--grid-points", confint_args.grid_points, "Scan grid size");
  confint_cmd->add_flag("--no-diagnostics", confint_args.no_diagnostics,
                        "Omit the scan grid and crossings");
  confint_cmd->add_flag("--serial", confint_args.serial, "Use the serial scan kernel");

  InfoArgs info_args;
  auto* info_cmd = app.add_subcommand("info", "KL divergence, entropy, Fisher information, lambda");
  info_cmd->add_option("--kl", info_args.kl, "Two distribution files")->expected(2);
  info_cmd->add_option("--entropy", info_args.entropy, "Distribution file");
  info_cmd->add_option("--fisher", info_args.fisher, "family theta n")->expected(3);
  info_cmd->add_option("--lambda", info_args.lambda, "family theta n")->expected(3);
  info_cmd->add_option("--args", info_args.args, "key=value family arguments");
  info_cmd->add_option("--estimator", info_args.estimator, "natural, add-one, square, root")
      ->capture_default_str();

  PokerArgs poker_args;
  auto* poker_cmd = app.add_subcommand("poker", "Five-card hand categories");
  poker_cmd->add_option("--at", poker_args.at, "Category for the tail report");
  poker_cmd->add_flag("--serial", poker_args.serial, "Use the serial enumeration kernel");

  SampdistArgs sampdist_args;
  auto* sampdist_cmd = app.add_subcommand("sampdist", "Sampling distribution of a statistic");
  sampdist_cmd->add_option("--bag", sampdist_args.bag, "Bag or simple distribution JSON")
      ->required();
  sampdist_cmd->add_option("--n", sampdist_args.n, "Sample size")->required();
  sampdist_cmd->add_option("--stat", sampdist_args.stat,
                           "sum, mean, min, max, range, first, count:LABEL");
  sampdist_cmd->add_option("--mode", sampdist_args.mode, "subsets, ordered or iid");
  sampdist_cmd->add_flag("--serial", sampdist_args.serial, "Use the serial enumeration kernel");

  InvarianceArgs invariance_args;
  auto* invariance_cmd =
      app.add_subcommand("invariance", "Bias and efficiency under a reparameterization");
  invariance_cmd->add_option("--family", invariance_args.family, "Model family");
  invariance_cmd->add_option("--args", invariance_args.args, "key=value family arguments");
  invariance_cmd->add_option("--transform", invariance_args.transform,
                             "identity, reciprocal, log, linear:a,b");
  invariance_cmd->add_option("--grid", invariance_args.grid, "Comma-separated parameter values")
      ->required();
  invariance_cmd->add_option("--csv", invariance_args.csv,
                             "Print the original or transformed report as CSV");

  std::string plot_file;
  auto* plotdata_cmd = app.add_subcommand("plotdata", "Rectangle geometry CSV");
  plotdata_cmd->add_option("--dist", plot_file, "Distribution JSON")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (lottery_cmd->parsed()) lottery(lottery_args, out);
    if (tail_cmd->parsed()) tail(tail_args, out);
    if (test_cmd->parsed()) test(test_args, out);
    if (confint_cmd->parsed()) confint(confint_args, out);
    if (info_cmd->parsed()) info(info_args, out);
    if (poker_cmd->parsed()) poker(poker_args, out);
    if (sampdist_cmd->parsed()) sampdist(sampdist_args, out);
    if (invariance_cmd->parsed()) invariance(invariance_args, out);
    if (plotdata_cmd->parsed()) plotdata(plot_file, out);
    return kOk;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << "fil " << kEngineVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    emit_error(err, "UsageError", e.what());
    return kInvalidInput;
  } catch (const Error& e) {
    emit_error(err, to_string(e.code()), e.what());
    return e.code() == ErrorCode::EnumerationBudgetExceeded ? kBudgetExceeded : kInvalidInput;
  } catch (const nlohmann::json::exception& e) {
    emit_error(err, "InvalidArgument", e.what());
    return kInvalidInput;
  } catch (const std::exception& e) {
    emit_error(err, "InternalError", e.what());
    return kInternal;
  }
}

}  // namespace fil::cli
