#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adcal/instance.hpp"
#include "adcal/selection.hpp"

namespace adcal {

// A normalized distribution over instance.ads (same indexing).
struct AdDistribution {
  std::vector<Rational> mass;
  Rational normalizer;
};

// Conditioning event for E[p | z, b, q]; bid and query are optional.
struct Condition {
  std::size_t bucket = 1;
  std::optional<Rational> bid;
  std::optional<std::string> query;
};

struct BucketCalibration {
  std::optional<Rational> observed;  // E_f[p | z], absent when Pr_f(z) = 0
  Rational predicted;                // f(z)
  std::optional<Rational> residual;  // observed - predicted
};

struct CalibrationReport {
  std::vector<BucketCalibration> buckets;  // 0-based, bucket z at [z-1]

  bool self_calibrated() const;
};

// Pr_C(i) = Pr^Q(q_i) / C. Throws InvalidArgument for an instance with no ads.
AdDistribution pr_candidate(const ProblemInstance& instance);

// Pr_f(i) = w_i / sum_j w_j. Throws EmptySelection if nothing shows.
AdDistribution pr_shown(const ProblemInstance& instance, const PredictionMap& f);
AdDistribution pr_shown(const ShowDistribution& shown);

std::optional<Rational> conditional_ctr(const AdDistribution& dist,
                                        const ProblemInstance& instance,
                                        const Condition& cond);

// Unconditional E[p] under `dist`.
Rational mean_ctr(const AdDistribution& dist, const ProblemInstance& instance);

// Marginal probability of bucket z under `dist`.
Rational bucket_mass(const AdDistribution& dist, const ProblemInstance& instance,
                     std::size_t bucket);

// Per-impression cost: 1 under ALL, 0 under ONE.
Rational impression_cost(Mechanism m);

// EV(f) = sum_i w_i (p_i b_i - cost); zero when nothing shows.
Rational expected_value(const ProblemInstance& instance, const PredictionMap& f);
Rational expected_value(const ProblemInstance& instance,
                        const ShowDistribution& shown);

CalibrationReport calibration_report(const ProblemInstance& instance,
                                     const PredictionMap& f);

}  // namespace adcal
