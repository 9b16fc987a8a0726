#include "adcal/properties.hpp"

#include <functional>
#include <map>
#include <set>

#include "adcal/errors.hpp"
#include "adcal/metrics.hpp"
#include "adcal/optimize.hpp"

namespace adcal {

std::string_view to_string(Property p) {
  switch (p) {
    case Property::kE1:
      return "E1";
    case Property::kE2:
      return "E2";
    case Property::kSI:
      break;
  }
  return "SI";
}

namespace {

PropertyVerdict fail(Property p, PropertyWitness w) {
  return PropertyVerdict{p, false, std::move(w)};
}

std::set<Rational> bids_in(const ProblemInstance& instance, std::size_t z,
                           const std::string* query) {
  std::set<Rational> out;
  for (const auto& ad : instance.ads) {
    if (ad.bucket == z && (!query || ad.query == *query)) out.insert(ad.bid);
  }
  return out;
}

}  // namespace

PropertyVerdict check_e1(const ProblemInstance& instance) {
  if (instance.ads.empty()) return {Property::kE1, true, std::nullopt};
  const auto dist = pr_candidate(instance);
  for (std::size_t z = 1; z <= instance.buckets; ++z) {
    const auto pz = conditional_ctr(dist, instance, {z, {}, {}});
    if (!pz) continue;
    for (const auto& q : instance.queries.entries) {
      const auto pzq = conditional_ctr(dist, instance, {z, {}, q.id});
      if (!pzq) continue;
      if (*pzq != *pz) {
        return fail(Property::kE1, {"E_C[p|z,q] = E_C[p|z]", z, std::nullopt,
                                    q.id, *pzq, *pz, std::nullopt, std::nullopt});
      }
      for (const auto& b : bids_in(instance, z, &q.id)) {
        const auto pzbq = conditional_ctr(dist, instance, {z, b, q.id});
        if (pzbq && *pzbq != *pzq) {
          return fail(Property::kE1, {"E_C[p|z,b,q] = E_C[p|z,q]", z, b, q.id,
                                      *pzbq, *pzq, std::nullopt, std::nullopt});
        }
      }
    }
  }
  return {Property::kE1, true, std::nullopt};
}

PropertyVerdict check_e2(const ProblemInstance& instance) {
  if (instance.ads.empty()) return {Property::kE2, true, std::nullopt};
  const auto dist = pr_candidate(instance);
  for (std::size_t z = 1; z <= instance.buckets; ++z) {
    const auto pz = conditional_ctr(dist, instance, {z, {}, {}});
    if (!pz) continue;
    for (const auto& b : bids_in(instance, z, nullptr)) {
      const auto pzb = conditional_ctr(dist, instance, {z, b, {}});
      if (pzb && *pzb != *pz) {
        return fail(Property::kE2, {"E_C[p|z,b] = E_C[p|z]", z, b, std::nullopt,
                                    *pzb, *pz, std::nullopt, std::nullopt});
      }
    }
  }
  return {Property::kE2, true, std::nullopt};
}

namespace {

// Extremes of E_f[p|z] seen so far for one bucket, with the maps producing them.
struct Extremes {
  std::optional<Rational> low;
  std::optional<Rational> high;
  PredictionMap low_map;
  PredictionMap high_map;

  void observe(const Rational& v, const std::function<PredictionMap()>& map) {
    if (!low || v < *low) {
      low = v;
      low_map = map();
    }
    if (!high || v > *high) {
      high = v;
      high_map = map();
    }
  }
};

PropertyVerdict si_verdict(const std::vector<Extremes>& per_bucket) {
  for (std::size_t z = 1; z <= per_bucket.size(); ++z) {
    const auto& e = per_bucket[z - 1];
    if (e.low && *e.low != *e.high) {
      return fail(Property::kSI, {"E_f[p|z] = E_f'[p|z]", z, std::nullopt,
                                  std::nullopt, *e.low, *e.high, e.low_map,
                                  e.high_map});
    }
  }
  return {Property::kSI, true, std::nullopt};
}

}  // namespace

PropertyVerdict check_si(const ProblemInstance& instance,
                         std::uint64_t config_budget) {
  std::vector<Extremes> per_bucket(instance.buckets);

  if (instance.mechanism == Mechanism::kAll) {
    // Buckets are independent; E_f[p|z] depends only on the prefix shown.
    const auto probs = ad_query_probabilities(instance);
    for (std::size_t z = 1; z <= instance.buckets; ++z) {
      std::map<Rational, std::pair<Rational, Rational>, std::greater<>> groups;
      for (std::size_t i = 0; i < instance.ads.size(); ++i) {
        const Ad& ad = instance.ads[i];
        if (ad.bucket != z) continue;
        groups[ad.bid].first += probs[i];
        groups[ad.bid].second += probs[i] * ad.ctr;
      }
      Rational mass;
      Rational clicks;
      for (const auto& [bid, g] : groups) {
        if (bid < Rational(1)) break;  // unreachable with f(z) <= 1
        mass += g.first;
        clicks += g.second;
        const Rational threshold = bid.inverse();
        per_bucket[z - 1].observe(clicks / mass, [&] {
          auto f = PredictionMap::zeros(instance.buckets);
          f.at(z) = threshold;
          return f;
        });
      }
    }
    return si_verdict(per_bucket);
  }

  const auto& queries = instance.queries.entries;
  for_each_configuration(
      instance, config_budget, [&](const WinnerConfiguration& config) {
        std::map<std::size_t, std::pair<Rational, Rational>> observed;
        for (std::size_t qi = 0; qi < queries.size(); ++qi) {
          const auto& w = config.winners[qi];
          if (w.empty()) continue;
          const Rational share =
              queries[qi].probability / Rational(static_cast<long long>(w.size()));
          for (auto i : w) {
            auto& o = observed[instance.ads[i].bucket];
            o.first += share;
            o.second += share * instance.ads[i].ctr;
          }
        }
        for (const auto& [z, o] : observed) {
          per_bucket[z - 1].observe(o.second / o.first, [&] {
            return *feasible_config(instance, config);
          });
        }
        return true;
      });
  return si_verdict(per_bucket);
}

PredictionMap baseline_map(const ProblemInstance& instance) {
  auto f = PredictionMap::zeros(instance.buckets);
  if (instance.ads.empty()) return f;
  const auto dist = pr_candidate(instance);
  for (std::size_t z = 1; z <= instance.buckets; ++z) {
    if (auto v = conditional_ctr(dist, instance, {z, {}, {}})) f.at(z) = *v;
  }
  return f;
}

PredictionMap single_query_one_map(const ProblemInstance& instance) {
  if (instance.mechanism != Mechanism::kOne) {
    throw InvalidArgument("single_query_one_map requires mechanism ONE");
  }
  if (instance.queries.entries.size() != 1) {
    throw InvalidArgument("single_query_one_map requires exactly one query");
  }
  auto f = PredictionMap::zeros(instance.buckets);
  if (instance.ads.empty()) return f;
  const auto dist = pr_candidate(instance);
  for (std::size_t z = 1; z <= instance.buckets; ++z) {
    const auto bids = bids_in(instance, z, nullptr);
    if (bids.empty()) continue;
    f.at(z) = *conditional_ctr(dist, instance, {z, *bids.rbegin(), {}});
  }
  return f;
}

}  // namespace adcal
