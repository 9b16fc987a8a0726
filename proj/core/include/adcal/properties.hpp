#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "adcal/calibrate.hpp"
#include "adcal/instance.hpp"

namespace adcal {

enum class Property { kE1, kE2, kSI };

std::string_view to_string(Property p);

// The identity that failed, with its conditioning values and both exact
// sides. For E1/E2 the sides are E_C expectations; for SI they are E_f[p|z]
// under two maps (lhs_map / rhs_map) that select differently.
struct PropertyWitness {
  std::string identity;
  std::size_t bucket = 1;
  std::optional<Rational> bid;
  std::optional<std::string> query;
  Rational lhs;
  Rational rhs;
  std::optional<PredictionMap> lhs_map;
  std::optional<PredictionMap> rhs_map;
};

struct PropertyVerdict {
  Property property = Property::kE1;
  bool holds = true;
  std::optional<PropertyWitness> witness;  // present iff !holds
};

// E_C[p|z,b,q] == E_C[p|z,q] == E_C[p|z] for every cell with positive mass.
PropertyVerdict check_e1(const ProblemInstance& instance);

// E_C[p|z,b] == E_C[p|z] wherever both are defined.
PropertyVerdict check_e2(const ProblemInstance& instance);

// E_f[p|z] is the same for every achievable selection that shows bucket z.
// Under ALL the achievable selections per bucket are the bid-group prefixes
// reachable with f(z) <= 1; under ONE they are the feasible winner
// configurations, so this may throw BudgetExceeded.
PropertyVerdict check_si(const ProblemInstance& instance,
                         std::uint64_t config_budget = kDefaultConfigBudget);

// f*(z) = E_C[p|z], or 0 for a bucket without ads.
PredictionMap baseline_map(const ProblemInstance& instance);

// Single-query ONE instances: f*(z) = E_C[p | z, b(z)] with b(z) the highest
// bid in bucket z (0 for empty buckets). Self-calibrated and EV-maximizing.
// Throws InvalidArgument for ALL or more than one query.
PredictionMap single_query_one_map(const ProblemInstance& instance);

}  // namespace adcal
