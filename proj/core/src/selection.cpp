#include "adcal/selection.hpp"

#include "adcal/errors.hpp"

namespace adcal {

bool ShowDistribution::any_shown() const {
  for (const auto& w : weight) {
    if (!w.is_zero()) return true;
  }
  return false;
}

Rational ShowDistribution::total_weight() const {
  Rational sum;
  for (const auto& w : weight) sum += w;
  return sum;
}

ShowDistribution show_distribution(const ProblemInstance& instance,
                                   const PredictionMap& f) {
  require_map_size(instance, f);
  const auto& ads = instance.ads;
  ShowDistribution out;
  out.conditional.assign(ads.size(), Rational(0));

  if (instance.mechanism == Mechanism::kAll) {
    const Rational one(1);
    for (std::size_t i = 0; i < ads.size(); ++i) {
      if (ads[i].bid * f.at(ads[i].bucket) >= one) out.conditional[i] = one;
    }
  } else {
    const auto query_of = ad_query_indices(instance);
    std::vector<std::vector<std::size_t>> winners(instance.queries.entries.size());
    std::vector<Rational> best(winners.size());
    for (std::size_t i = 0; i < ads.size(); ++i) {
      const Rational score = ads[i].bid * f.at(ads[i].bucket);
      if (score.sign() <= 0) continue;
      auto& w = winners[query_of[i]];
      auto& top = best[query_of[i]];
      if (w.empty() || score > top) {
        top = score;
        w.assign(1, i);
      } else if (score == top) {
        w.push_back(i);
      }
    }
    for (const auto& w : winners) {
      if (w.empty()) continue;
      const Rational share(1, static_cast<long long>(w.size()));
      for (auto i : w) out.conditional[i] = share;
    }
  }

  const auto probs = ad_query_probabilities(instance);
  out.weight.reserve(ads.size());
  for (std::size_t i = 0; i < ads.size(); ++i) {
    out.weight.push_back(probs[i] * out.conditional[i]);
  }
  return out;
}

std::string selection_signature(const ShowDistribution& shown) {
  std::string sig;
  for (std::size_t i = 0; i < shown.conditional.size(); ++i) {
    if (i) sig += ';';
    sig += shown.conditional[i].str();
  }
  return sig;
}

std::string selection_signature(const ProblemInstance& instance,
                                const PredictionMap& f) {
  return selection_signature(show_distribution(instance, f));
}

}  // namespace adcal
