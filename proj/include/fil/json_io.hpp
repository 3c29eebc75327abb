#pragma once

// JSON encoding of engine values. Reals are written as 17-significant-digit
// decimal strings, probabilities as {"decimal", "rational"} objects with the
// rational present only when exact.

#include <filesystem>
#include <optional>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "fil/dist_core.hpp"
#include "fil/inference.hpp"
#include "fil/info.hpp"
#include "fil/sampling.hpp"
#include "fil/tail_area.hpp"

namespace fil::json_io {

using Json = nlohmann::ordered_json;

Json real(double x);
Json prob(const Prob& p, const std::optional<BigInt>& denominator = std::nullopt);

Json to_json(const SimpleDistribution& dist);
Json to_json(const DiscreteDistribution& dist);
Json to_json(const ContinuousDistribution& dist);
Json to_json(const SamplingDistribution& sampling);
Json to_json(const Bag& bag);
Json to_json(const TailAreaReport& report,
             const std::optional<BigInt>& denominator = std::nullopt);
Json to_json(const ReductioResult& result,
             const std::optional<BigInt>& denominator = std::nullopt);
Json to_json(const std::vector<LevelSet>& partition);
Json to_json(const ConfidenceRegion& region, bool diagnostics = true);
Json to_json(const AssessmentReport& report);
Json to_json(const InvarianceReport& report);

using AnyDistribution =
    std::variant<SimpleDistribution, DiscreteDistribution, ContinuousDistribution>;

/// Accepts a distribution object or any payload carrying one under
/// "distribution". Malformed documents raise Error with a specific code.
AnyDistribution parse_distribution(const Json& doc);
/// Simple and sampling distributions are converted to discrete ones;
/// continuous ones raise InvalidArgument.
DiscreteDistribution parse_discrete(const Json& doc);
/// A {"kind":"bag"} document or a simple distribution to expand.
Bag parse_bag(const Json& doc);

Json read_file(const std::filesystem::path& path);

}  // namespace fil::json_io
