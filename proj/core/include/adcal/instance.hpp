#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "adcal/rational.hpp"

namespace adcal {

enum class Mechanism { kOne, kAll };

std::string_view to_string(Mechanism m);
Mechanism parse_mechanism(std::string_view text);

// One candidate ad: true click probability, bid per click, raw prediction
// bucket (1-based) and the single query it is eligible for.
struct Ad {
  std::string id;
  std::string query;
  Rational ctr;
  Rational bid;
  std::size_t bucket = 1;

  friend bool operator==(const Ad&, const Ad&) = default;
};

struct QueryEntry {
  std::string id;
  Rational probability;

  friend bool operator==(const QueryEntry&, const QueryEntry&) = default;
};

// Pr^Q, kept in declaration order so every report is deterministic.
struct QueryDistribution {
  std::vector<QueryEntry> entries;

  // Position of `id` in `entries`, or entries.size() if absent.
  std::size_t index_of(std::string_view id) const;
  friend bool operator==(const QueryDistribution&,
                         const QueryDistribution&) = default;
};

struct ProblemInstance {
  std::size_t buckets = 1;
  std::vector<Ad> ads;
  QueryDistribution queries;
  Mechanism mechanism = Mechanism::kAll;

  friend bool operator==(const ProblemInstance&,
                         const ProblemInstance&) = default;
};

// f : {1..K} -> [0,1]. Stored 0-based; at() takes a 1-based bucket.
struct PredictionMap {
  std::vector<Rational> values;

  PredictionMap() = default;
  explicit PredictionMap(std::vector<Rational> v) : values(std::move(v)) {}
  static PredictionMap zeros(std::size_t buckets);
  static PredictionMap constant(std::size_t buckets, const Rational& value);

  std::size_t size() const { return values.size(); }
  const Rational& at(std::size_t bucket) const { return values.at(bucket - 1); }
  Rational& at(std::size_t bucket) { return values.at(bucket - 1); }

  // Comma-separated rationals, e.g. "1/2,3/10".
  std::string str() const;
  static PredictionMap parse(std::string_view text);

  friend bool operator==(const PredictionMap&, const PredictionMap&) = default;
};

struct Violation {
  std::string path;
  std::string message;
};

// Every broken invariant of `instance`, each naming the offending field.
std::vector<Violation> validate(const ProblemInstance& instance);

// Throws InvalidArgument when validate() reports anything.
void require_valid(const ProblemInstance& instance);

// C(q): the ads eligible for query `q`, in input order. Throws
// InvalidArgument if `q` is not a declared query.
std::vector<Ad> candidates(const ProblemInstance& instance, std::string_view q);
// Same as candidates() but as positions in instance.ads.
std::vector<std::size_t> candidate_indices(const ProblemInstance& instance,
                                           std::string_view q);

// Throws InvalidArgument unless f has exactly one value per bucket.
void require_map_size(const ProblemInstance& instance, const PredictionMap& f);

// Position of q_i in instance.queries.entries for every ad, in ad order.
// Throws InvalidArgument for an ad naming an unknown query.
std::vector<std::size_t> ad_query_indices(const ProblemInstance& instance);

// Pr^Q(q_i) for every ad, in ad order.
std::vector<Rational> ad_query_probabilities(const ProblemInstance& instance);

}  // namespace adcal
