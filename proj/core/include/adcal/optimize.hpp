#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "adcal/instance.hpp"

namespace adcal {

// Under ONE: which ads win each query, and which buckets are forced to 0.
// winners[q] lists positions in instance.ads for the q-th query of
// instance.queries; an empty list means nothing shows for that query.
struct WinnerConfiguration {
  std::vector<std::vector<std::size_t>> winners;
  std::set<std::size_t> excluded_buckets;  // 1-based

  friend bool operator==(const WinnerConfiguration&,
                         const WinnerConfiguration&) = default;
  // Canonical order: lexicographic on winners, then excluded buckets.
  friend auto operator<=>(const WinnerConfiguration& a,
                          const WinnerConfiguration& b) {
    if (auto c = a.winners <=> b.winners; c != 0) return c;
    return a.excluded_buckets <=> b.excluded_buckets;
  }
};

struct OptimalMap {
  PredictionMap map;
  Rational ev;
};

// Exact maximizer of EV under ALL. Each bucket is solved on its own: ads are
// grouped by bid, groups are sorted by bid descending, and the best prefix of
// groups (possibly empty) is kept with f(z) = 1 / (smallest bid kept). Groups
// with bid below 1 are unreachable since f(z) <= 1. Among equal-EV prefixes
// the shortest wins. Throws InvalidArgument for a ONE instance.
OptimalMap optimal_map_all(const ProblemInstance& instance);

// A map with f(z) = 0 exactly on the excluded buckets and f(z) in (0,1]
// elsewhere that realizes `config` under ONE, or nullopt if none exists.
// Throws InvalidArgument for a malformed configuration.
std::optional<PredictionMap> feasible_config(const ProblemInstance& instance,
                                             const WinnerConfiguration& config);
// As above, additionally requiring f(z) == value for every pinned bucket.
std::optional<PredictionMap> feasible_config(
    const ProblemInstance& instance, const WinnerConfiguration& config,
    const std::map<std::size_t, Rational>& pinned);

// The ShowDistribution-equivalent of a configuration: Pr_f(i | q_i) per ad.
std::vector<Rational> configuration_conditionals(
    const ProblemInstance& instance, const WinnerConfiguration& config);

// EV of any map realizing `config` (tied winners contribute their mean).
Rational configuration_value(const ProblemInstance& instance,
                             const WinnerConfiguration& config);

// Visits every feasible ONE configuration whose excluded set is exactly the
// buckets that win nowhere. Every achievable selection is realized by exactly
// one such configuration. Visit order is deterministic. Throws BudgetExceeded
// once more than `budget` configurations have been produced. Returns the
// number visited. The visitor may return false to stop early.
std::uint64_t for_each_configuration(
    const ProblemInstance& instance, std::uint64_t budget,
    const std::function<bool(const WinnerConfiguration&)>& visit);

// Exact maximizer of EV under ONE by exhaustive configuration search. Ties
// on EV resolve to the canonically smallest configuration.
OptimalMap optimal_map_one_exact(const ProblemInstance& instance,
                                 std::uint64_t config_budget);

// Complete tournament on players 1..n: beats(i, j) says whether i beat j.
class Tournament {
 public:
  explicit Tournament(std::size_t players);

  std::size_t players() const { return players_; }
  // Records that `winner` beat `loser` (1-based), replacing any prior result.
  void set_winner(std::size_t winner, std::size_t loser);
  bool beats(std::size_t i, std::size_t j) const;

  static Tournament transitive(std::size_t players);  // i beats j iff i < j
  static Tournament random(std::size_t players, std::uint64_t seed);
  // Every tournament on n players, in a fixed order (2^(n(n-1)/2) of them).
  static std::vector<Tournament> all(std::size_t players);

 private:
  std::size_t players_;
  std::vector<char> beats_;
};

// rank[i-1] is the position mu_i (1 = top) of player i.
struct Ranking {
  std::vector<std::size_t> rank;
};

// ONE instance encoding MFAS: bucket per player, one equally likely query per
// pair, a CTR-1 ad in the winner's bucket and a CTR-0 ad in the loser's.
ProblemInstance mfas_to_instance(const Tournament& t);

struct MfasSolution {
  std::size_t upsets;
  Ranking ranking;
};

inline constexpr std::size_t kMfasMaxPlayers = 9;

// Exact minimum number of upsets over all rankings, by enumeration. Throws
// InvalidArgument for more than kMfasMaxPlayers players.
MfasSolution mfas_exact(const Tournament& t);

std::size_t count_upsets(const Tournament& t, const Ranking& r);

}  // namespace adcal
