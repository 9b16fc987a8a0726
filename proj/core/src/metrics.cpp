#include "adcal/metrics.hpp"

#include "adcal/errors.hpp"

namespace adcal {

bool CalibrationReport::self_calibrated() const {
  for (const auto& b : buckets) {
    if (b.residual && !b.residual->is_zero()) return false;
  }
  return true;
}

namespace {

AdDistribution normalize(std::vector<Rational> raw) {
  AdDistribution d;
  for (const auto& m : raw) d.normalizer += m;
  for (auto& m : raw) m /= d.normalizer;
  d.mass = std::move(raw);
  return d;
}

}  // namespace

AdDistribution pr_candidate(const ProblemInstance& instance) {
  if (instance.ads.empty()) {
    throw InvalidArgument("Pr_C is undefined for an instance with no ads");
  }
  return normalize(ad_query_probabilities(instance));
}

AdDistribution pr_shown(const ShowDistribution& shown) {
  if (!shown.any_shown()) throw EmptySelection();
  return normalize(shown.weight);
}

AdDistribution pr_shown(const ProblemInstance& instance, const PredictionMap& f) {
  return pr_shown(show_distribution(instance, f));
}

std::optional<Rational> conditional_ctr(const AdDistribution& dist,
                                        const ProblemInstance& instance,
                                        const Condition& cond) {
  if (dist.mass.size() != instance.ads.size()) {
    throw InvalidArgument("distribution does not match the instance's ads");
  }
  Rational mass;
  Rational clicks;
  for (std::size_t i = 0; i < instance.ads.size(); ++i) {
    const Ad& ad = instance.ads[i];
    if (ad.bucket != cond.bucket) continue;
    if (cond.bid && ad.bid != *cond.bid) continue;
    if (cond.query && ad.query != *cond.query) continue;
    if (dist.mass[i].is_zero()) continue;
    mass += dist.mass[i];
    clicks += dist.mass[i] * ad.ctr;
  }
  if (mass.is_zero()) return std::nullopt;
  return clicks / mass;
}

Rational mean_ctr(const AdDistribution& dist, const ProblemInstance& instance) {
  Rational sum;
  for (std::size_t i = 0; i < instance.ads.size(); ++i) {
    sum += dist.mass[i] * instance.ads[i].ctr;
  }
  return sum;
}

Rational bucket_mass(const AdDistribution& dist, const ProblemInstance& instance,
                     std::size_t bucket) {
  Rational sum;
  for (std::size_t i = 0; i < instance.ads.size(); ++i) {
    if (instance.ads[i].bucket == bucket) sum += dist.mass[i];
  }
  return sum;
}

Rational impression_cost(Mechanism m) {
  return m == Mechanism::kAll ? Rational(1) : Rational(0);
}

Rational expected_value(const ProblemInstance& instance,
                        const ShowDistribution& shown) {
  const Rational cost = impression_cost(instance.mechanism);
  Rational ev;
  for (std::size_t i = 0; i < instance.ads.size(); ++i) {
    if (shown.weight[i].is_zero()) continue;
    const Ad& ad = instance.ads[i];
    ev += shown.weight[i] * (ad.ctr * ad.bid - cost);
  }
  return ev;
}

Rational expected_value(const ProblemInstance& instance, const PredictionMap& f) {
  return expected_value(instance, show_distribution(instance, f));
}

CalibrationReport calibration_report(const ProblemInstance& instance,
                                     const PredictionMap& f) {
  const auto shown = show_distribution(instance, f);
  CalibrationReport report;
  report.buckets.resize(instance.buckets);
  for (std::size_t z = 1; z <= instance.buckets; ++z) {
    report.buckets[z - 1].predicted = f.at(z);
  }
  if (!shown.any_shown()) return report;

  const auto dist = pr_shown(shown);
  for (std::size_t z = 1; z <= instance.buckets; ++z) {
    auto& b = report.buckets[z - 1];
    b.observed = conditional_ctr(dist, instance, Condition{z, {}, {}});
    if (b.observed) b.residual = *b.observed - b.predicted;
  }
  return report;
}

}  // namespace adcal
