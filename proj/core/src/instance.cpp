#include "adcal/instance.hpp"

#include <set>
#include <sstream>
#include <unordered_map>

#include "adcal/errors.hpp"

namespace adcal {

std::string_view to_string(Mechanism m) {
  return m == Mechanism::kOne ? "ONE" : "ALL";
}

Mechanism parse_mechanism(std::string_view text) {
  if (text == "ONE") return Mechanism::kOne;
  if (text == "ALL") return Mechanism::kAll;
  throw ParseError("unknown mechanism '" + std::string(text) + "'");
}

std::size_t QueryDistribution::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].id == id) return i;
  }
  return entries.size();
}

PredictionMap PredictionMap::zeros(std::size_t buckets) {
  return PredictionMap(std::vector<Rational>(buckets));
}

PredictionMap PredictionMap::constant(std::size_t buckets,
                                      const Rational& value) {
  return PredictionMap(std::vector<Rational>(buckets, value));
}

std::string PredictionMap::str() const {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += values[i].str();
  }
  return out;
}

PredictionMap PredictionMap::parse(std::string_view text) {
  PredictionMap f;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    f.values.push_back(Rational::parse(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (const auto& v : f.values) {
    if (v < Rational(0) || v > Rational(1)) {
      throw ParseError("prediction map value " + v.str() + " outside [0,1]");
    }
  }
  return f;
}

std::vector<Violation> validate(const ProblemInstance& instance) {
  std::vector<Violation> out;
  auto add = [&out](std::string path, std::string message) {
    out.push_back({std::move(path), std::move(message)});
  };

  if (instance.buckets == 0) add("buckets", "K must be positive");

  Rational total;
  std::set<std::string> query_ids;
  for (std::size_t i = 0; i < instance.queries.entries.size(); ++i) {
    const auto& q = instance.queries.entries[i];
    const std::string path = "queries[" + q.id + "]";
    if (!query_ids.insert(q.id).second) add(path, "duplicate query id");
    if (q.probability.sign() <= 0) add(path, "probability must be positive");
    total += q.probability;
  }
  if (instance.queries.entries.empty()) {
    add("queries", "query distribution is empty");
  } else if (total != Rational(1)) {
    add("queries", "probabilities sum to " + total.str() + ", not 1");
  }

  std::set<std::string> ad_ids;
  for (const auto& ad : instance.ads) {
    const std::string path = "ads[" + ad.id + "]";
    if (!ad_ids.insert(ad.id).second) add(path, "duplicate ad id");
    if (!query_ids.count(ad.query)) {
      add(path + ".query", "unknown query '" + ad.query + "'");
    }
    if (ad.ctr < Rational(0) || ad.ctr > Rational(1)) {
      add(path + ".ctr", "ctr " + ad.ctr.str() + " outside [0,1]");
    }
    if (ad.bid.sign() <= 0) add(path + ".bid", "bid must be positive");
    if (ad.bucket < 1 || ad.bucket > instance.buckets) {
      add(path + ".bucket", "bucket " + std::to_string(ad.bucket) +
                                " outside 1.." +
                                std::to_string(instance.buckets));
    }
  }
  return out;
}

void require_valid(const ProblemInstance& instance) {
  const auto violations = validate(instance);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid instance:";
  for (const auto& v : violations) msg << ' ' << v.path << ": " << v.message << ';';
  throw InvalidArgument(msg.str());
}

std::vector<std::size_t> candidate_indices(const ProblemInstance& instance,
                                           std::string_view q) {
  if (instance.queries.index_of(q) == instance.queries.entries.size()) {
    throw InvalidArgument("unknown query '" + std::string(q) + "'");
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < instance.ads.size(); ++i) {
    if (instance.ads[i].query == q) out.push_back(i);
  }
  return out;
}

std::vector<Ad> candidates(const ProblemInstance& instance, std::string_view q) {
  std::vector<Ad> out;
  for (auto i : candidate_indices(instance, q)) out.push_back(instance.ads[i]);
  return out;
}

void require_map_size(const ProblemInstance& instance, const PredictionMap& f) {
  if (f.size() != instance.buckets) {
    throw InvalidArgument("prediction map has " + std::to_string(f.size()) +
                          " values but the instance has " +
                          std::to_string(instance.buckets) + " buckets");
  }
}

std::vector<std::size_t> ad_query_indices(const ProblemInstance& instance) {
  std::unordered_map<std::string_view, std::size_t> index;
  const auto& entries = instance.queries.entries;
  for (std::size_t i = 0; i < entries.size(); ++i) index.emplace(entries[i].id, i);
  std::vector<std::size_t> out;
  out.reserve(instance.ads.size());
  for (const auto& ad : instance.ads) {
    const auto it = index.find(ad.query);
    if (it == index.end()) {
      throw InvalidArgument("ad '" + ad.id + "' names unknown query '" +
                            ad.query + "'");
    }
    out.push_back(it->second);
  }
  return out;
}

std::vector<Rational> ad_query_probabilities(const ProblemInstance& instance) {
  std::vector<Rational> out;
  out.reserve(instance.ads.size());
  for (auto qi : ad_query_indices(instance)) {
    out.push_back(instance.queries.entries[qi].probability);
  }
  return out;
}

}  // namespace adcal
