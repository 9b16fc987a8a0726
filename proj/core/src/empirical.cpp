#include "adcal/empirical.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "adcal/errors.hpp"
#include "adcal/rng.hpp"
#include "adcal/selection.hpp"

namespace adcal {

BucketCounts bucket_counts(const ClickLog& log, std::size_t buckets) {
  BucketCounts c{std::vector<std::uint64_t>(buckets),
                 std::vector<std::uint64_t>(buckets)};
  for (const auto& rec : log.records) {
    if (rec.bucket == 0 || rec.bucket > buckets) {
      throw InvalidArgument("click log bucket " + std::to_string(rec.bucket) +
                            " outside 1.." + std::to_string(buckets));
    }
    ++c.impressions[rec.bucket - 1];
    if (rec.clicked) ++c.clicks[rec.bucket - 1];
  }
  return c;
}

ClickLog simulate_batch(const ProblemInstance& instance, const PredictionMap& f,
                        std::uint64_t queries, std::uint64_t seed) {
  require_map_size(instance, f);
  const auto shown = show_distribution(instance, f);
  const auto& entries = instance.queries.entries;

  std::vector<Threshold> query_cdf;
  Rational cumulative;
  for (const auto& q : entries) {
    cumulative += q.probability;
    query_cdf.push_back(Rng::threshold(cumulative));
  }
  std::vector<std::vector<std::size_t>> showing(entries.size());
  for (std::size_t i = 0; i < instance.ads.size(); ++i) {
    if (shown.conditional[i].is_zero()) continue;
    showing[instance.queries.index_of(instance.ads[i].query)].push_back(i);
  }
  std::vector<Threshold> click_threshold;
  for (const auto& a : instance.ads) click_threshold.push_back(Rng::threshold(a.ctr));

  ClickLog log;
  log.map = f;
  log.queries = queries;
  log.seed = seed;
  Rng rng(seed);
  for (std::uint64_t n = 0; n < queries; ++n) {
    const std::uint64_t u = rng.next();
    const auto q = static_cast<std::size_t>(
        std::upper_bound(query_cdf.begin(), query_cdf.end(),
                         static_cast<Threshold>(u)) -
        query_cdf.begin());
    const auto& ads = showing[std::min(q, entries.size() - 1)];
    if (ads.empty()) continue;
    auto serve = [&](std::size_t i) {
      const Ad& a = instance.ads[i];
      log.records.push_back(
          {a.query, a.id, a.bucket, rng.bernoulli(click_threshold[i])});
    };
    if (instance.mechanism == Mechanism::kOne) {
      serve(ads.size() == 1 ? ads.front() : ads[rng.uniform_index(ads.size())]);
    } else {
      for (auto i : ads) serve(i);
    }
  }
  return log;
}

PredictionMap empirical_t(const PredictionMap& f, const ClickLog& log) {
  const auto counts = bucket_counts(log, f.size());
  PredictionMap next = f;
  for (std::size_t z = 0; z < f.size(); ++z) {
    if (counts.impressions[z] == 0) continue;
    next.values[z] = Rational(static_cast<long long>(counts.clicks[z]),
                              static_cast<long long>(counts.impressions[z]));
  }
  return next;
}

std::vector<PredictionMap> run_loop(const ProblemInstance& instance,
                                    const PredictionMap& f0, std::size_t batches,
                                    std::uint64_t queries, std::uint64_t seed,
                                    const BatchObserver& observe) {
  if (batches == 0) throw InvalidArgument("run_loop needs batches >= 1");
  std::vector<PredictionMap> maps{f0};
  for (std::size_t t = 0; t < batches; ++t) {
    const auto log = simulate_batch(instance, maps.back(), queries, seed + t);
    maps.push_back(empirical_t(maps.back(), log));
    if (observe) observe(t, log);
  }
  return maps;
}

void write_click_log(std::ostream& out, const ClickLog& log) {
  out << "#map=" << log.map.str() << " seed=" << log.seed
      << " queries=" << log.queries << '\n';
  for (const auto& r : log.records) {
    out << r.query << '\t' << r.ad << '\t' << r.bucket << '\t'
        << (r.clicked ? 1 : 0) << '\n';
  }
}

namespace {

std::uint64_t parse_u64(std::string_view text, std::size_t line) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ParseError("click log line " + std::to_string(line) +
                     ": bad integer '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

ClickLog read_click_log(std::istream& in) {
  ClickLog log;
  std::string line;
  if (!std::getline(in, line) || line.rfind("#map=", 0) != 0) {
    throw ParseError("click log must start with a '#map=' header");
  }
  {
    std::istringstream header(line.substr(1));
    std::string field;
    bool have_seed = false;
    bool have_queries = false;
    while (header >> field) {
      const auto eq = field.find('=');
      const std::string key = field.substr(0, eq);
      const std::string value = eq == std::string::npos ? "" : field.substr(eq + 1);
      if (key == "map") {
        log.map = PredictionMap::parse(value);
      } else if (key == "seed") {
        log.seed = parse_u64(value, 1);
        have_seed = true;
      } else if (key == "queries") {
        log.queries = parse_u64(value, 1);
        have_queries = true;
      } else {
        throw ParseError("click log header: unknown field '" + key + "'");
      }
    }
    if (!have_seed || !have_queries) {
      throw ParseError("click log header needs seed= and queries=");
    }
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string_view> cols;
    std::string_view rest(line);
    for (std::size_t tab; (tab = rest.find('\t')) != std::string_view::npos;) {
      cols.push_back(rest.substr(0, tab));
      rest.remove_prefix(tab + 1);
    }
    cols.push_back(rest);
    if (cols.size() != 4) {
      throw ParseError("click log line " + std::to_string(lineno) +
                       ": expected 4 tab-separated fields");
    }
    const auto bucket = parse_u64(cols[2], lineno);
    const auto click = parse_u64(cols[3], lineno);
    if (bucket == 0 || click > 1) {
      throw ParseError("click log line " + std::to_string(lineno) +
                       ": bucket must be >= 1 and click 0 or 1");
    }
    log.records.push_back({std::string(cols[0]), std::string(cols[1]),
                           static_cast<std::size_t>(bucket), click == 1});
  }
  return log;
}

}  // namespace adcal
