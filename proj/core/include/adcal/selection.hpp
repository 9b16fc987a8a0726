#pragma once

#include <string>
#include <vector>

#include "adcal/instance.hpp"

namespace adcal {

// Who shows under a given map. Both vectors are indexed like instance.ads.
struct ShowDistribution {
  // Pr_f(i | q_i): 0/1 under ALL, a uniform tie share under ONE.
  std::vector<Rational> conditional;
  // w_i = Pr^Q(q_i) * Pr_f(i | q_i).
  std::vector<Rational> weight;

  bool any_shown() const;
  Rational total_weight() const;

  friend bool operator==(const ShowDistribution&,
                         const ShowDistribution&) = default;
};

// ALL shows ad i iff b_i * f(z_i) >= 1. ONE shows, per query, the ads tied at
// the maximum positive score b * f(z), each with probability 1/ties; a query
// whose candidates all score 0 shows nothing.
ShowDistribution show_distribution(const ProblemInstance& instance,
                                   const PredictionMap& f);

// Canonical text encoding of the conditional show probabilities. Two maps
// have equal signatures iff they induce the same ShowDistribution.
std::string selection_signature(const ProblemInstance& instance,
                                const PredictionMap& f);
std::string selection_signature(const ShowDistribution& shown);

}  // namespace adcal
