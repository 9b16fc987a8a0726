#include "adcal/calibrate.hpp"

#include <limits>
#include <map>

#include "adcal/errors.hpp"
#include "adcal/metrics.hpp"
#include "adcal/optimize.hpp"
#include "adcal/selection.hpp"

namespace adcal {

std::string_view to_string(TraceOutcome o) {
  switch (o) {
    case TraceOutcome::kFixedPoint:
      return "fixed_point";
    case TraceOutcome::kCycle:
      return "cycle";
    case TraceOutcome::kBudgetExhausted:
      break;
  }
  return "budget_exhausted";
}

PredictionMap apply_t(const ProblemInstance& instance, const PredictionMap& f) {
  const auto shown = show_distribution(instance, f);
  PredictionMap next = f;
  std::vector<Rational> mass(instance.buckets);
  std::vector<Rational> clicks(instance.buckets);
  for (std::size_t i = 0; i < instance.ads.size(); ++i) {
    if (shown.weight[i].is_zero()) continue;
    const Ad& ad = instance.ads[i];
    mass[ad.bucket - 1] += shown.weight[i];
    clicks[ad.bucket - 1] += shown.weight[i] * ad.ctr;
  }
  for (std::size_t z = 0; z < instance.buckets; ++z) {
    if (!mass[z].is_zero()) next.values[z] = clicks[z] / mass[z];
  }
  return next;
}

CalibrationTrace iterate_t(const ProblemInstance& instance,
                           const PredictionMap& f0, std::size_t max_steps) {
  if (max_steps == 0) throw InvalidArgument("iterate_t needs max_steps >= 1");
  require_map_size(instance, f0);
  CalibrationTrace trace;
  trace.maps.push_back(f0);
  for (std::size_t step = 0; step < max_steps; ++step) {
    PredictionMap next = apply_t(instance, trace.maps.back());
    for (std::size_t j = 0; j < trace.maps.size(); ++j) {
      if (trace.maps[j] == next) {
        trace.start = j;
        trace.period = trace.maps.size() - j;
        trace.outcome =
            trace.period == 1 ? TraceOutcome::kFixedPoint : TraceOutcome::kCycle;
        trace.maps.push_back(std::move(next));
        return trace;
      }
    }
    trace.maps.push_back(std::move(next));
  }
  trace.outcome = TraceOutcome::kBudgetExhausted;
  return trace;
}

namespace {

std::vector<BucketOption> all_bucket_options(const ProblemInstance& instance,
                                             const std::vector<Rational>& probs,
                                             std::size_t z) {
  struct Group {
    Rational mass;
    Rational clicks;
  };
  std::map<Rational, Group, std::greater<>> groups;
  for (std::size_t i = 0; i < instance.ads.size(); ++i) {
    const Ad& ad = instance.ads[i];
    if (ad.bucket != z) continue;
    auto& g = groups[ad.bid];
    g.mass += probs[i];
    g.clicks += probs[i] * ad.ctr;
  }

  std::vector<BucketOption> options{{0, Rational(0)}};
  Rational mass;
  Rational clicks;
  std::size_t j = 0;
  for (auto it = groups.begin(); it != groups.end(); ++it) {
    ++j;
    mass += it->second.mass;
    clicks += it->second.clicks;
    const Rational observed = clicks / mass;
    // Prefix j reproduces itself iff its own CTR keeps group j in and
    // group j+1 out.
    if (it->first * observed < Rational(1)) continue;
    auto next = std::next(it);
    if (next != groups.end() && next->first * observed >= Rational(1)) continue;
    options.push_back({j, observed});
  }
  return options;
}

FixedPointReport enumerate_all(const ProblemInstance& instance,
                               std::size_t class_limit) {
  FixedPointReport report;
  const auto probs = ad_query_probabilities(instance);
  std::uint64_t total = 1;
  bool overflow = false;
  for (std::size_t z = 1; z <= instance.buckets; ++z) {
    report.bucket_options.push_back(all_bucket_options(instance, probs, z));
    const auto n = report.bucket_options.back().size();
    if (total > std::numeric_limits<std::uint64_t>::max() / n) overflow = true;
    total *= n;
  }
  if (!overflow) report.total_classes = total;

  // Odometer over option indices, bucket 1 most significant.
  std::vector<std::size_t> pick(instance.buckets, 0);
  bool done = false;
  while (!done) {
    if (report.classes.size() == class_limit) {
      report.truncated = true;
      break;
    }
    FixedPointClass c;
    c.representative = PredictionMap::zeros(instance.buckets);
    for (std::size_t z = 0; z < instance.buckets; ++z) {
      const auto& opt = report.bucket_options[z][pick[z]];
      c.representative.values[z] = opt.value;
      if (opt.groups > 0) c.shows_ads = true;
    }
    const auto shown = show_distribution(instance, c.representative);
    c.signature = selection_signature(shown);
    c.ev = expected_value(instance, shown);
    report.classes.push_back(std::move(c));

    done = true;
    for (std::size_t z = instance.buckets; z-- > 0;) {
      if (++pick[z] < report.bucket_options[z].size()) {
        done = false;
        break;
      }
      pick[z] = 0;
    }
  }
  return report;
}

FixedPointReport enumerate_one(const ProblemInstance& instance,
                               std::size_t class_limit,
                               std::uint64_t config_budget) {
  FixedPointReport report;
  for_each_configuration(
      instance, config_budget, [&](const WinnerConfiguration& config) {
        // Observed CTR of every shown bucket under this configuration.
        std::map<std::size_t, Rational> mass;
        std::map<std::size_t, Rational> clicks;
        const auto& queries = instance.queries.entries;
        for (std::size_t qi = 0; qi < queries.size(); ++qi) {
          const auto& w = config.winners[qi];
          if (w.empty()) continue;
          const Rational share =
              queries[qi].probability / Rational(static_cast<long long>(w.size()));
          for (auto i : w) {
            const Ad& ad = instance.ads[i];
            mass[ad.bucket] += share;
            clicks[ad.bucket] += share * ad.ctr;
          }
        }
        std::map<std::size_t, Rational> pinned;
        for (const auto& [z, m] : mass) pinned[z] = clicks[z] / m;

        auto rep = feasible_config(instance, config, pinned);
        if (!rep) return true;
        if (report.classes.size() == class_limit) {
          report.truncated = true;
          return false;
        }
        FixedPointClass c;
        c.representative = std::move(*rep);
        const auto shown = show_distribution(instance, c.representative);
        c.signature = selection_signature(shown);
        c.shows_ads = shown.any_shown();
        c.ev = expected_value(instance, shown);
        report.classes.push_back(std::move(c));
        return true;
      });
  if (!report.truncated) report.total_classes = report.classes.size();
  return report;
}

}  // namespace

FixedPointReport enumerate_fixed_points(const ProblemInstance& instance,
                                        std::size_t class_limit,
                                        std::uint64_t config_budget) {
  if (class_limit == 0) throw InvalidArgument("class_limit must be at least 1");
  if (instance.mechanism == Mechanism::kAll) {
    return enumerate_all(instance, class_limit);
  }
  return enumerate_one(instance, class_limit, config_budget);
}

}  // namespace adcal
