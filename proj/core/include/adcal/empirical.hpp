#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "adcal/instance.hpp"

namespace adcal {

struct ClickRecord {
  std::string query;
  std::string ad;
  std::size_t bucket = 1;
  bool clicked = false;

  friend bool operator==(const ClickRecord&, const ClickRecord&) = default;
};

struct ClickLog {
  std::vector<ClickRecord> records;
  PredictionMap map;  // map the batch was served with
  std::uint64_t queries = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ClickLog&, const ClickLog&) = default;
};

struct BucketCounts {
  std::vector<std::uint64_t> impressions;  // 0-based, bucket z at [z-1]
  std::vector<std::uint64_t> clicks;
};

BucketCounts bucket_counts(const ClickLog& log, std::size_t buckets);

// Serves `queries` draws from Pr^Q under `f`. Per draw, in this order: one
// query (inverse CDF on a 64-bit output), under ONE one tie-break among the
// top-scoring ads when several tie, then one click draw per shown ad in
// input order. Uses Rng, so the log is a pure function of the arguments.
ClickLog simulate_batch(const ProblemInstance& instance, const PredictionMap& f,
                        std::uint64_t queries, std::uint64_t seed);

// clicks(z) / impressions(z) where bucket z was shown, f(z) elsewhere.
PredictionMap empirical_t(const PredictionMap& f, const ClickLog& log);

using BatchObserver = std::function<void(std::size_t batch, const ClickLog&)>;

// f0, f1, ..., f_batches where f_{t+1} = empirical_t(f_t, batch t) and batch
// t is simulated with seed + t. `observe`, if set, sees each batch's log.
std::vector<PredictionMap> run_loop(const ProblemInstance& instance,
                                    const PredictionMap& f0, std::size_t batches,
                                    std::uint64_t queries, std::uint64_t seed,
                                    const BatchObserver& observe = {});

// Text form: a header "#map=<f> seed=<s> queries=<n>", then one
// "query<TAB>ad<TAB>bucket<TAB>0|1" line per record.
void write_click_log(std::ostream& out, const ClickLog& log);
ClickLog read_click_log(std::istream& in);

}  // namespace adcal
