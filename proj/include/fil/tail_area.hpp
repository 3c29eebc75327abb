#pragma once

#include <string_view>

#include "fil/dist_core.hpp"

namespace fil {

enum class Side { Left, Right, TwoSided };

std::string_view to_string(Side side);
Side parse_side(std::string_view text);

/// Inclusive tail areas at a point. `two_sided` is 2 * min(left, right)
/// capped at 1 and `percentile` is 100 * left.
struct TailAreaReport {
  Prob left;
  Prob right;
  Prob two_sided;
  Prob percentile;

  const Prob& select(Side side) const;
};

/// Tails at a numeric point of a numeric space. x need not be a support
/// point. Unordered spaces raise OrderingRequired.
TailAreaReport tail_report(const DiscreteDistribution& dist, const Rational& x);
/// Tails at a label of an ordered or numeric space.
TailAreaReport tail_report_label(const DiscreteDistribution& dist, std::string_view label);
TailAreaReport tail_report(const ContinuousDistribution& dist, double x);

/// Builds a report from the two inclusive tails.
TailAreaReport make_tail_report(Prob left, Prob right);

struct Rarity {
  bool rare = false;
  Prob tail;
};

/// True iff the selected tail is <= alpha; 0 < alpha < 1.
Rarity is_rare(const DiscreteDistribution& dist, const Rational& x, double alpha, Side side);
Rarity is_rare_label(const DiscreteDistribution& dist, std::string_view label,
                     double alpha, Side side);
Rarity is_rare(const ContinuousDistribution& dist, double x, double alpha, Side side);

/// Compares a tail against alpha, exactly when the tail is exact.
bool at_most(const Prob& tail, double alpha);

void require_level(double alpha);

}  // namespace fil
