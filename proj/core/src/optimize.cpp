#include "adcal/optimize.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "adcal/constraints.hpp"
#include "adcal/errors.hpp"
#include "adcal/rng.hpp"

namespace adcal {

// ---------------------------------------------------------------------------
// ALL

OptimalMap optimal_map_all(const ProblemInstance& instance) {
  if (instance.mechanism != Mechanism::kAll) {
    throw InvalidArgument("optimal_map_all requires mechanism ALL");
  }
  const auto probs = ad_query_probabilities(instance);
  OptimalMap out{PredictionMap::zeros(instance.buckets), Rational(0)};

  for (std::size_t z = 1; z <= instance.buckets; ++z) {
    // Value of each bid group, highest bid first.
    std::map<Rational, Rational, std::greater<>> groups;
    for (std::size_t i = 0; i < instance.ads.size(); ++i) {
      const Ad& ad = instance.ads[i];
      if (ad.bucket != z) continue;
      groups[ad.bid] += probs[i] * (ad.ctr * ad.bid - Rational(1));
    }
    Rational running;
    Rational best;
    std::optional<Rational> best_bid;
    for (const auto& [bid, value] : groups) {
      if (bid < Rational(1)) break;
      running += value;
      if (running > best) {
        best = running;
        best_bid = bid;
      }
    }
    if (best_bid) out.map.at(z) = best_bid->inverse();
    out.ev += best;
  }
  return out;
}

// ---------------------------------------------------------------------------
// ONE configurations

namespace {

void require_one(const ProblemInstance& instance, const char* what) {
  if (instance.mechanism != Mechanism::kOne) {
    throw InvalidArgument(std::string(what) + " requires mechanism ONE");
  }
}

// Per-query view used by the configuration search: for every bucket present
// among the query's candidates, its highest bid and the ads holding it. Only
// that cell can win for the bucket, and it wins as a block.
struct QueryCells {
  std::vector<std::size_t> buckets;  // ascending
  std::vector<Rational> top_bid;     // parallel to buckets
  std::vector<std::vector<std::size_t>> top_ads;
};

std::vector<QueryCells> build_cells(const ProblemInstance& instance) {
  const auto& queries = instance.queries.entries;
  std::vector<QueryCells> cells(queries.size());
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    std::map<std::size_t, std::pair<Rational, std::vector<std::size_t>>> by_bucket;
    for (std::size_t i = 0; i < instance.ads.size(); ++i) {
      const Ad& ad = instance.ads[i];
      if (ad.query != queries[qi].id) continue;
      auto it = by_bucket.find(ad.bucket);
      if (it == by_bucket.end()) {
        by_bucket.emplace(ad.bucket, std::make_pair(ad.bid, std::vector<std::size_t>{i}));
      } else if (ad.bid > it->second.first) {
        it->second = {ad.bid, {i}};
      } else if (ad.bid == it->second.first) {
        it->second.second.push_back(i);
      }
    }
    for (auto& [z, cell] : by_bucket) {
      cells[qi].buckets.push_back(z);
      cells[qi].top_bid.push_back(cell.first);
      cells[qi].top_ads.push_back(std::move(cell.second));
    }
  }
  return cells;
}

class ConfigurationSearch {
 public:
  ConfigurationSearch(const ProblemInstance& instance, std::uint64_t budget,
                      const std::function<bool(const WinnerConfiguration&)>& visit)
      : instance_(instance),
        cells_(build_cells(instance)),
        budget_(budget),
        visit_(visit) {}

  std::uint64_t run() {
    std::vector<std::size_t> nonempty;
    std::vector<char> has_ads(instance_.buckets + 1, 0);
    for (const auto& ad : instance_.ads) has_ads[ad.bucket] = 1;
    for (std::size_t z = 1; z <= instance_.buckets; ++z) {
      if (has_ads[z]) nonempty.push_back(z);
    }
    if (nonempty.size() >= 63) throw BudgetExceeded("too many buckets to enumerate");

    const std::uint64_t subsets = std::uint64_t{1} << nonempty.size();
    for (std::uint64_t mask = 0; mask < subsets && !stopped_; ++mask) {
      in_shown_.assign(instance_.buckets + 1, 0);
      for (std::size_t k = 0; k < nonempty.size(); ++k) {
        if (mask >> k & 1) in_shown_[nonempty[k]] = 1;
      }
      config_.winners.assign(cells_.size(), {});
      config_.excluded_buckets.clear();
      for (std::size_t z = 1; z <= instance_.buckets; ++z) {
        if (!in_shown_[z]) config_.excluded_buckets.insert(z);
      }
      wins_.assign(instance_.buckets + 1, 0);
      search(0, RatioConstraints(instance_.buckets));
    }
    return count_;
  }

 private:
  void search(std::size_t qi, const RatioConstraints& system) {
    if (stopped_) return;
    if (qi == cells_.size()) {
      for (std::size_t z = 1; z <= instance_.buckets; ++z) {
        if (in_shown_[z] && wins_[z] == 0) return;
      }
      if (++count_ > budget_) {
        throw BudgetExceeded("more than " + std::to_string(budget_) +
                             " winner configurations");
      }
      if (!visit_(config_)) stopped_ = true;
      return;
    }

    const QueryCells& q = cells_[qi];
    std::vector<std::size_t> live;  // positions into q.buckets
    for (std::size_t k = 0; k < q.buckets.size(); ++k) {
      if (in_shown_[q.buckets[k]]) live.push_back(k);
    }
    if (live.empty()) {
      config_.winners[qi].clear();
      search(qi + 1, system);
      return;
    }

    const std::uint64_t subsets = std::uint64_t{1} << live.size();
    for (std::uint64_t mask = 1; mask < subsets && !stopped_; ++mask) {
      RatioConstraints next = system;
      std::size_t lead = live.size();
      bool ok = true;
      for (std::size_t m = 0; m < live.size() && ok; ++m) {
        const std::size_t k = live[m];
        if (!(mask >> m & 1)) continue;
        if (lead == live.size()) {
          lead = k;
          continue;
        }
        // b_k x_k == b_lead x_lead
        ok = next.add_equal(q.buckets[k], q.top_bid[lead] / q.top_bid[k],
                            q.buckets[lead]);
      }
      for (std::size_t m = 0; m < live.size() && ok; ++m) {
        if (mask >> m & 1) continue;
        const std::size_t k = live[m];
        // b_k x_k < b_lead x_lead
        ok = next.add_upper(q.buckets[k], q.top_bid[lead] / q.top_bid[k],
                            q.buckets[lead], true);
      }
      if (!ok) continue;

      auto& winners = config_.winners[qi];
      winners.clear();
      for (std::size_t m = 0; m < live.size(); ++m) {
        if (!(mask >> m & 1)) continue;
        const std::size_t k = live[m];
        winners.insert(winners.end(), q.top_ads[k].begin(), q.top_ads[k].end());
        ++wins_[q.buckets[k]];
      }
      std::sort(winners.begin(), winners.end());
      search(qi + 1, next);
      for (std::size_t m = 0; m < live.size(); ++m) {
        if (mask >> m & 1) --wins_[q.buckets[live[m]]];
      }
    }
    config_.winners[qi].clear();
  }

  const ProblemInstance& instance_;
  std::vector<QueryCells> cells_;
  std::uint64_t budget_;
  const std::function<bool(const WinnerConfiguration&)>& visit_;

  WinnerConfiguration config_;
  std::vector<char> in_shown_;
  std::vector<std::size_t> wins_;
  std::uint64_t count_ = 0;
  bool stopped_ = false;
};

}  // namespace

std::uint64_t for_each_configuration(
    const ProblemInstance& instance, std::uint64_t budget,
    const std::function<bool(const WinnerConfiguration&)>& visit) {
  require_one(instance, "configuration enumeration");
  return ConfigurationSearch(instance, budget, visit).run();
}

std::optional<PredictionMap> feasible_config(const ProblemInstance& instance,
                                             const WinnerConfiguration& config) {
  return feasible_config(instance, config, {});
}

std::optional<PredictionMap> feasible_config(
    const ProblemInstance& instance, const WinnerConfiguration& config,
    const std::map<std::size_t, Rational>& pinned) {
  require_one(instance, "feasible_config");
  const auto& queries = instance.queries.entries;
  if (config.winners.size() != queries.size()) {
    throw InvalidArgument("configuration lists " +
                          std::to_string(config.winners.size()) +
                          " queries, instance has " +
                          std::to_string(queries.size()));
  }
  for (auto z : config.excluded_buckets) {
    if (z < 1 || z > instance.buckets) {
      throw InvalidArgument("excluded bucket " + std::to_string(z) + " out of range");
    }
  }
  auto excluded = [&](std::size_t z) { return config.excluded_buckets.count(z) > 0; };

  RatioConstraints system(instance.buckets);
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const auto cand = candidate_indices(instance, queries[qi].id);
    const auto& w = config.winners[qi];
    std::set<std::size_t> winner_set(w.begin(), w.end());
    if (winner_set.size() != w.size()) {
      throw InvalidArgument("duplicate winner in query '" + queries[qi].id + "'");
    }
    for (auto i : w) {
      if (std::find(cand.begin(), cand.end(), i) == cand.end()) {
        throw InvalidArgument("winner is not a candidate of query '" +
                              queries[qi].id + "'");
      }
      if (excluded(instance.ads[i].bucket)) {
        throw InvalidArgument("winner '" + instance.ads[i].id +
                              "' sits in an excluded bucket");
      }
    }
    if (w.empty()) {
      for (auto i : cand) {
        if (!excluded(instance.ads[i].bucket)) {
          throw InvalidArgument("no-show query '" + queries[qi].id +
                                "' has a candidate in a live bucket");
        }
      }
      continue;
    }
    const Ad& lead = instance.ads[w.front()];
    for (std::size_t k = 1; k < w.size(); ++k) {
      const Ad& other = instance.ads[w[k]];
      system.add_equal(other.bucket, lead.bid / other.bid, lead.bucket);
    }
    for (auto i : cand) {
      if (winner_set.count(i) || excluded(instance.ads[i].bucket)) continue;
      const Ad& loser = instance.ads[i];
      system.add_upper(loser.bucket, lead.bid / loser.bid, lead.bucket, true);
    }
  }
  for (const auto& [z, value] : pinned) {
    if (z < 1 || z > instance.buckets) {
      throw InvalidArgument("pinned bucket " + std::to_string(z) + " out of range");
    }
    if (excluded(z)) {
      if (!value.is_zero()) return std::nullopt;
      continue;
    }
    system.pin(z, value);
  }
  if (!system.feasible()) return std::nullopt;

  const auto x = system.witness();
  PredictionMap f = PredictionMap::zeros(instance.buckets);
  for (std::size_t z = 1; z <= instance.buckets; ++z) {
    if (!excluded(z)) f.at(z) = x[z];
  }
  return f;
}

std::vector<Rational> configuration_conditionals(const ProblemInstance& instance,
                                                 const WinnerConfiguration& config) {
  std::vector<Rational> out(instance.ads.size());
  for (const auto& w : config.winners) {
    if (w.empty()) continue;
    const Rational share(1, static_cast<long long>(w.size()));
    for (auto i : w) out.at(i) = share;
  }
  return out;
}

Rational configuration_value(const ProblemInstance& instance,
                             const WinnerConfiguration& config) {
  Rational ev;
  const auto& queries = instance.queries.entries;
  for (std::size_t qi = 0; qi < config.winners.size(); ++qi) {
    const auto& w = config.winners[qi];
    if (w.empty()) continue;
    Rational sum;
    for (auto i : w) sum += instance.ads[i].ctr * instance.ads[i].bid;
    ev += queries[qi].probability * sum / Rational(static_cast<long long>(w.size()));
  }
  return ev;
}

OptimalMap optimal_map_one_exact(const ProblemInstance& instance,
                                 std::uint64_t config_budget) {
  require_one(instance, "optimal_map_one_exact");
  std::optional<WinnerConfiguration> best;
  Rational best_ev;
  for_each_configuration(instance, config_budget,
                         [&](const WinnerConfiguration& c) {
                           const Rational ev = configuration_value(instance, c);
                           if (!best || ev > best_ev ||
                               (ev == best_ev && c < *best)) {
                             best = c;
                             best_ev = ev;
                           }
                           return true;
                         });
  auto f = feasible_config(instance, *best);
  return OptimalMap{std::move(*f), best_ev};
}

// ---------------------------------------------------------------------------
// MFAS

Tournament::Tournament(std::size_t players)
    : players_(players), beats_(players * players, 0) {
  if (players < 2) throw InvalidArgument("a tournament needs at least 2 players");
  for (std::size_t i = 1; i <= players; ++i) {
    for (std::size_t j = i + 1; j <= players; ++j) set_winner(i, j);
  }
}

void Tournament::set_winner(std::size_t winner, std::size_t loser) {
  if (winner == loser || winner < 1 || loser < 1 || winner > players_ ||
      loser > players_) {
    throw InvalidArgument("invalid tournament pair");
  }
  beats_[(winner - 1) * players_ + (loser - 1)] = 1;
  beats_[(loser - 1) * players_ + (winner - 1)] = 0;
}

bool Tournament::beats(std::size_t i, std::size_t j) const {
  return beats_.at((i - 1) * players_ + (j - 1)) != 0;
}

Tournament Tournament::transitive(std::size_t players) { return Tournament(players); }

Tournament Tournament::random(std::size_t players, std::uint64_t seed) {
  Tournament t(players);
  Rng rng(seed);
  for (std::size_t i = 1; i <= players; ++i) {
    for (std::size_t j = i + 1; j <= players; ++j) {
      if (rng.next() >> 63) t.set_winner(j, i);
    }
  }
  return t;
}

std::vector<Tournament> Tournament::all(std::size_t players) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 1; i <= players; ++i) {
    for (std::size_t j = i + 1; j <= players; ++j) pairs.emplace_back(i, j);
  }
  if (pairs.size() > 20) throw InvalidArgument("too many tournaments to list");
  std::vector<Tournament> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
    Tournament t(players);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (mask >> k & 1) t.set_winner(pairs[k].second, pairs[k].first);
    }
    out.push_back(std::move(t));
  }
  return out;
}

ProblemInstance mfas_to_instance(const Tournament& t) {
  const std::size_t n = t.players();
  const long long pairs = static_cast<long long>(n * (n - 1) / 2);
  ProblemInstance inst;
  inst.buckets = n;
  inst.mechanism = Mechanism::kOne;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      const std::string tag = std::to_string(i) + "_" + std::to_string(j);
      const std::string q = "q" + tag;
      inst.queries.entries.push_back({q, Rational(1, pairs)});
      const std::size_t winner = t.beats(i, j) ? i : j;
      const std::size_t loser = t.beats(i, j) ? j : i;
      inst.ads.push_back({"w" + tag, q, Rational(1), Rational(1), winner});
      inst.ads.push_back({"l" + tag, q, Rational(0), Rational(1), loser});
    }
  }
  return inst;
}

std::size_t count_upsets(const Tournament& t, const Ranking& r) {
  std::size_t upsets = 0;
  for (std::size_t i = 1; i <= t.players(); ++i) {
    for (std::size_t j = 1; j <= t.players(); ++j) {
      if (i != j && t.beats(i, j) && r.rank.at(i - 1) > r.rank.at(j - 1)) ++upsets;
    }
  }
  return upsets;
}

MfasSolution mfas_exact(const Tournament& t) {
  const std::size_t n = t.players();
  if (n > kMfasMaxPlayers) {
    throw InvalidArgument("mfas_exact supports at most " +
                          std::to_string(kMfasMaxPlayers) + " players");
  }
  // order[k] is the player placed at position k (0 = top).
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{1});
  std::size_t best = n * n;
  std::vector<std::size_t> best_order = order;
  do {
    std::size_t upsets = 0;
    for (std::size_t a = 0; a < n && upsets < best; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (t.beats(order[b], order[a])) ++upsets;
      }
    }
    if (upsets < best) {
      best = upsets;
      best_order = order;
    }
  } while (best > 0 && std::next_permutation(order.begin(), order.end()));

  Ranking r;
  r.rank.resize(n);
  for (std::size_t k = 0; k < n; ++k) r.rank[best_order[k] - 1] = k + 1;
  return {best, r};
}

}  // namespace adcal
