#include "fil/tail_area.hpp"

#include <algorithm>
#include <cmath>

#include "fil/error.hpp"

namespace fil {

std::string_view to_string(Side side) {
  switch (side) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::TwoSided: return "two";
  }
  return "two";
}

Side parse_side(std::string_view text) {
  if (text == "left") return Side::Left;
  if (text == "right") return Side::Right;
  if (text == "two" || text == "two_sided" || text == "two-sided") return Side::TwoSided;
  throw Error(ErrorCode::InvalidArgument, "unknown side '" + std::string(text) + "'");
}

const Prob& TailAreaReport::select(Side side) const {
  switch (side) {
    case Side::Left: return left;
    case Side::Right: return right;
    case Side::TwoSided: break;
  }
  return two_sided;
}

TailAreaReport make_tail_report(Prob left, Prob right) {
  TailAreaReport report;
  if (left.exact && right.exact) {
    Rational smaller = std::min(*left.exact, *right.exact);
    Rational two = std::min(Rational(1), Rational(smaller * 2));
    report.two_sided = Prob::from_exact(two);
    report.percentile = Prob::from_exact(*left.exact * 100);
  } else {
    report.two_sided = Prob::from_double(std::min(1.0, 2.0 * std::min(left.value, right.value)));
    report.percentile = Prob::from_double(100.0 * left.value);
  }
  report.left = std::move(left);
  report.right = std::move(right);
  return report;
}

namespace {

// Inclusive tails around ordering coordinate position `at`, comparing with
// `cmp(i)`: negative below, zero equal, positive above.
template <typename Compare>
TailAreaReport discrete_tails(const DiscreteDistribution& dist, Compare cmp) {
  if (dist.is_exact()) {
    Rational left = 0;
    Rational right = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      const int c = cmp(i);
      if (c <= 0) left += dist.exact_probs()[i];
      if (c >= 0) right += dist.exact_probs()[i];
    }
    return make_tail_report(Prob::from_exact(left), Prob::from_exact(right));
  }
  double left = 0.0;
  double right = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const int c = cmp(i);
    if (c <= 0) left += dist.probs()[i];
    if (c >= 0) right += dist.probs()[i];
  }
  return make_tail_report(Prob::from_double(std::min(left, 1.0)),
                          Prob::from_double(std::min(right, 1.0)));
}

void require_order(const LabelSpace& space) {
  if (!space.has_order()) {
    throw Error(ErrorCode::OrderingRequired,
                "tail areas need an ordered or numeric label space");
  }
}

}  // namespace

void require_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  }
}

TailAreaReport tail_report(const DiscreteDistribution& dist, const Rational& x) {
  const LabelSpace& space = dist.space();
  require_order(space);
  if (!space.is_numeric()) {
    throw Error(ErrorCode::InvalidArgument,
                "ordered label spaces take a label, not a number");
  }
  const auto& values = space.exact_values();
  return discrete_tails(dist, [&](std::size_t i) {
    return values[i] < x ? -1 : (values[i] == x ? 0 : 1);
  });
}

TailAreaReport tail_report_label(const DiscreteDistribution& dist, std::string_view label) {
  const LabelSpace& space = dist.space();
  require_order(space);
  auto at = space.index_of(label);
  if (!at) {
    if (space.is_numeric()) return tail_report(dist, parse_rational(label));
    throw Error(ErrorCode::InvalidArgument,
                "label '" + std::string(label) + "' is not in the ordered label space");
  }
  const std::size_t pos = *at;
  return discrete_tails(dist, [pos](std::size_t i) {
    return i < pos ? -1 : (i == pos ? 0 : 1);
  });
}

TailAreaReport tail_report(const ContinuousDistribution& dist, double x) {
  if (std::isnan(x)) throw Error(ErrorCode::InvalidArgument, "tail at NaN");
  return make_tail_report(Prob::from_double(dist.cdf(x)),
                          Prob::from_double(dist.survival(x)));
}

bool at_most(const Prob& tail, double alpha) {
  if (tail.exact) return *tail.exact <= rational_from_double(alpha);
  return tail.value <= alpha;
}

Rarity is_rare(const DiscreteDistribution& dist, const Rational& x, double alpha,
               Side side) {
  require_level(alpha);
  Prob tail = tail_report(dist, x).select(side);
  return {at_most(tail, alpha), tail};
}

Rarity is_rare_label(const DiscreteDistribution& dist, std::string_view label,
                     double alpha, Side side) {
  require_level(alpha);
  Prob tail = tail_report_label(dist, label).select(side);
  return {at_most(tail, alpha), tail};
}

Rarity is_rare(const ContinuousDistribution& dist, double x, double alpha, Side side) {
  require_level(alpha);
  Prob tail = tail_report(dist, x).select(side);
  return {at_most(tail, alpha), tail};
}

}  // namespace fil
