#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adcal/instance.hpp"

namespace adcal {

// T(f)(z) = E_f[p | z] where bucket z shows, f(z) elsewhere. If nothing
// shows at all, T(f) = f.
PredictionMap apply_t(const ProblemInstance& instance, const PredictionMap& f);

enum class TraceOutcome { kFixedPoint, kCycle, kBudgetExhausted };

std::string_view to_string(TraceOutcome o);

// maps[0] = f0 and maps[k+1] = T(maps[k]). On a fixed point or cycle the
// sequence ends with the first repeated map, so maps[start + period] ==
// maps[start]; a fixed point is a cycle of period 1.
struct CalibrationTrace {
  std::vector<PredictionMap> maps;
  TraceOutcome outcome = TraceOutcome::kBudgetExhausted;
  std::size_t start = 0;
  std::size_t period = 0;
};

// Applies T at most max_steps times, stopping at the first exact repetition.
CalibrationTrace iterate_t(const ProblemInstance& instance,
                           const PredictionMap& f0, std::size_t max_steps);

struct FixedPointClass {
  std::string signature;
  PredictionMap representative;
  bool shows_ads = false;
  Rational ev;
};

// Under ALL a bucket's fixed-point options are its self-consistent bid-group
// prefixes; joint classes are the cartesian product across buckets.
struct BucketOption {
  std::size_t groups = 0;  // number of bid groups shown, 0 = none
  Rational value;          // f(z) for this option
};

struct FixedPointReport {
  std::vector<FixedPointClass> classes;
  bool truncated = false;
  // Exact number of classes when known (nullopt if it overflows 64 bits or
  // the search stopped early).
  std::optional<std::uint64_t> total_classes;
  // ALL only: options per bucket (index z-1), in canonical order.
  std::vector<std::vector<BucketOption>> bucket_options;
};

inline constexpr std::uint64_t kDefaultConfigBudget = 1'000'000;

// Every fixed-point class of T, one representative each, materialized up to
// class_limit. Under ONE the search runs over winner configurations and may
// throw BudgetExceeded.
FixedPointReport enumerate_fixed_points(
    const ProblemInstance& instance, std::size_t class_limit,
    std::uint64_t config_budget = kDefaultConfigBudget);

}  // namespace adcal
