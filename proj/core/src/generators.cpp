#include "adcal/generators.hpp"

#include <charconv>
#include <map>
#include <tuple>

#include "adcal/errors.hpp"
#include "adcal/rng.hpp"

namespace adcal {

namespace {

Ad ad(std::string id, std::string query, Rational p, Rational b,
      std::size_t z = 1) {
  return Ad{std::move(id), std::move(query), std::move(p), std::move(b), z};
}

QueryDistribution uniform_queries(std::size_t n) {
  QueryDistribution q;
  for (std::size_t i = 1; i <= n; ++i) {
    q.entries.push_back(
        {"q" + std::to_string(i), Rational(1, static_cast<long long>(n))});
  }
  return q;
}

Rational r(long long n, long long d = 1) { return Rational(n, d); }

ProblemInstance fig1() {
  return prefix_family({r(1, 10), r(1, 5), r(3, 10), r(2, 5)});
}

ProblemInstance all_no_fixed_point() {
  ProblemInstance inst{1, {}, uniform_queries(1), Mechanism::kAll};
  inst.ads = {ad("A", "q1", r(7, 10), r(4)), ad("B", "q1", r(1, 10), r(2))};
  return inst;
}

ProblemInstance one_q1_counterexample() {
  ProblemInstance inst{2, {}, uniform_queries(2), Mechanism::kOne};
  inst.ads = {ad("A", "q1", r(1), r(2), 1), ad("B", "q1", r(0), r(2), 2),
              ad("C", "q2", r(1), r(2), 2), ad("D", "q2", r(0), r(1), 1)};
  return inst;
}

ProblemInstance one_no_fixed_point() {
  ProblemInstance inst{2, {}, uniform_queries(4), Mechanism::kOne};
  inst.ads = {ad("A", "q1", r(1, 2), r(1), 1), ad("B", "q2", r(3, 5), r(1), 2),
              ad("C", "q3", r(1, 2), r(1), 1), ad("D", "q3", r(3, 5), r(1), 2),
              ad("E", "q4", r(1, 5), r(1), 2), ad("F", "q4", r(3, 10), r(1), 1)};
  return inst;
}

ProblemInstance si_not_e1() {
  ProblemInstance inst{1, {}, uniform_queries(2), Mechanism::kOne};
  inst.ads = {ad("A", "q1", r(1, 10), r(1)), ad("B", "q1", r(1, 5), r(2)),
              ad("C", "q2", r(1, 10), r(2)), ad("D", "q2", r(1, 5), r(1))};
  return inst;
}

ProblemInstance e2_not_si() {
  ProblemInstance inst{2, {}, uniform_queries(2), Mechanism::kOne};
  inst.ads = {ad("A", "q1", r(1, 5), r(2), 1), ad("B", "q1", r(1, 10), r(1), 1),
              ad("E", "q1", r(1), r(9), 2), ad("C", "q2", r(1, 10), r(2), 1),
              ad("D", "q2", r(1, 5), r(1), 1)};
  return inst;
}

std::size_t parse_count(std::string_view text) {
  std::size_t n = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, n);
  if (ec != std::errc() || ptr != end || n == 0) {
    throw InvalidArgument("fixture parameter must be a positive integer: " +
                          std::string(text));
  }
  return n;
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{
      "fig1_many_fixed_points", "all_three_class",    "all_no_fixed_point",
      "one_q1_counterexample",  "one_no_fixed_point", "one_exponential",
      "si_not_e1",              "e2_not_si",          "si_not_nice"};
  return names;
}

ProblemInstance paper_fixture(std::string_view name) {
  std::string_view base = name;
  std::optional<std::string_view> param;
  if (auto colon = name.find(':'); colon != std::string_view::npos) {
    base = name.substr(0, colon);
    param = name.substr(colon + 1);
  } else if (auto open = name.find('('); open != std::string_view::npos) {
    if (name.back() != ')') {
      throw InvalidArgument("malformed fixture name: " + std::string(name));
    }
    base = name.substr(0, open);
    param = name.substr(open + 1, name.size() - open - 2);
  }

  auto no_param = [&](ProblemInstance inst) {
    if (param) {
      throw InvalidArgument("fixture takes no parameter: " + std::string(base));
    }
    return inst;
  };

  if (base == "fig1_many_fixed_points") return no_param(fig1());
  if (base == "all_no_fixed_point") return no_param(all_no_fixed_point());
  if (base == "one_q1_counterexample") return no_param(one_q1_counterexample());
  if (base == "one_no_fixed_point") return no_param(one_no_fixed_point());
  if (base == "si_not_e1") return no_param(si_not_e1());
  if (base == "e2_not_si") return no_param(e2_not_si());
  if (base == "all_three_class") {
    return all_three_class(param ? parse_count(*param) : 10);
  }
  if (base == "one_exponential") {
    return one_exponential(param ? parse_count(*param) : 3);
  }
  if (base == "si_not_nice") {
    return si_not_nice(param ? Rational::parse(*param) : r(1, 100));
  }
  throw InvalidArgument("unknown fixture: " + std::string(name));
}

ProblemInstance all_three_class(std::size_t n) {
  if (n == 0) throw InvalidArgument("all_three_class needs n >= 1");
  ProblemInstance inst{1, {}, uniform_queries(1), Mechanism::kAll};
  inst.ads.push_back(ad("A", "q1", r(1, 2), r(2)));
  for (std::size_t i = 1; i <= n; ++i) {
    inst.ads.push_back(ad("B" + std::to_string(i), "q1", r(1), r(19, 10)));
  }
  for (std::size_t i = 1; i <= n; ++i) {
    inst.ads.push_back(ad("C" + std::to_string(i), "q1", r(0), r(9, 5)));
  }
  return inst;
}

ProblemInstance one_exponential(std::size_t n) {
  if (n == 0) throw InvalidArgument("one_exponential needs n >= 1");
  ProblemInstance inst{n, {}, uniform_queries(1), Mechanism::kOne};
  for (std::size_t i = 1; i <= n; ++i) {
    const auto b = static_cast<long long>(i) + 1;
    inst.ads.push_back(ad(std::to_string(i), "q1", r(1, b), r(b), i));
  }
  return inst;
}

ProblemInstance si_not_nice(const Rational& epsilon) {
  if (epsilon.sign() <= 0) throw InvalidArgument("si_not_nice needs eps > 0");
  ProblemInstance inst{2, {}, uniform_queries(4), Mechanism::kOne};
  const Rational two_eps = epsilon * r(2);
  inst.ads = {ad("A", "q1", r(1), r(2), 1),       ad("B", "q1", r(0), r(2), 2),
              ad("C", "q2", r(1), r(2), 2),       ad("D", "q2", r(0), r(1), 1),
              ad("A'", "q3", r(0), two_eps, 1),   ad("B'", "q3", r(1), two_eps, 2),
              ad("C'", "q4", r(0), two_eps, 2),   ad("D'", "q4", r(1), epsilon, 1)};
  return inst;
}

ProblemInstance prefix_family(const std::vector<Rational>& ctrs) {
  if (ctrs.empty()) throw InvalidArgument("prefix_family needs at least one ctr");
  ProblemInstance inst{1, {}, uniform_queries(1), Mechanism::kAll};
  Rational sum;
  for (std::size_t i = 0; i < ctrs.size(); ++i) {
    const Rational& p = ctrs[i];
    if (p.sign() <= 0 || p > Rational(1)) {
      throw InvalidArgument("prefix_family ctrs must lie in (0, 1]");
    }
    if (i > 0 && !(ctrs[i - 1] < p)) {
      throw InvalidArgument("prefix_family ctrs must be strictly increasing");
    }
    sum += p;
    const Rational b = Rational(static_cast<long long>(i) + 1) / sum;
    inst.ads.push_back(ad(std::to_string(i + 1), "q1", p, b));
  }
  return inst;
}

namespace {

void check_spec(const RandomSpec& spec) {
  if (spec.queries == 0) throw InvalidArgument("random spec needs queries >= 1");
  if (spec.min_ads_per_query == 0 ||
      spec.max_ads_per_query < spec.min_ads_per_query) {
    throw InvalidArgument("random spec needs 1 <= min_ads <= max_ads");
  }
  if (spec.buckets == 0) throw InvalidArgument("random spec needs buckets >= 1");
  if (spec.bids.empty() || spec.ctrs.empty()) {
    throw InvalidArgument("random spec grids must be nonempty");
  }
  for (const auto& b : spec.bids) {
    if (b.sign() <= 0) throw InvalidArgument("random spec bids must be positive");
  }
  for (const auto& p : spec.ctrs) {
    if (p.sign() < 0 || p > Rational(1)) {
      throw InvalidArgument("random spec ctrs must lie in [0, 1]");
    }
  }
  if (spec.enforce == Property::kSI) {
    throw InvalidArgument("random spec can only enforce E1 or E2");
  }
}

// Rewrites the CTRs of `members` so their `weights`-weighted mean is `mean`.
// Consecutive ads are paired: the first takes a grid value g, the second the
// value that offsets it, and an unpaired last ad takes the mean.
void fill_cell(std::vector<Ad>& ads, const std::vector<std::size_t>& members,
               const std::vector<Rational>& weights, const Rational& mean,
               const std::vector<Rational>& grid, Rng& rng) {
  const Rational one(1);
  std::size_t k = 0;
  for (; k + 1 < members.size(); k += 2) {
    const auto i = members[k];
    const auto j = members[k + 1];
    const Rational ratio = weights[i] / weights[j];
    std::vector<std::pair<Rational, Rational>> options;
    for (const auto& g : grid) {
      const Rational partner = mean - (g - mean) * ratio;
      if (partner.sign() >= 0 && partner <= one) options.emplace_back(g, partner);
    }
    // Never empty: the mean itself is a grid value.
    const auto& [ci, cj] = rng.pick(options);
    ads[i].ctr = ci;
    ads[j].ctr = cj;
  }
  if (k < members.size()) ads[members[k]].ctr = mean;
}

}  // namespace

ProblemInstance random_instance(const RandomSpec& spec) {
  check_spec(spec);
  Rng rng(spec.seed);

  ProblemInstance inst;
  inst.buckets = spec.buckets;
  inst.mechanism = spec.mechanism;

  std::vector<Rational> query_weight;
  Rational total;
  for (std::size_t i = 1; i <= spec.queries; ++i) {
    const auto w = static_cast<long long>(rng.uniform_index(4)) + 1;
    query_weight.emplace_back(w);
    total += Rational(w);
  }
  for (std::size_t i = 0; i < spec.queries; ++i) {
    inst.queries.entries.push_back(
        {"q" + std::to_string(i + 1), query_weight[i] / total});
  }

  const std::size_t span = spec.max_ads_per_query - spec.min_ads_per_query + 1;
  std::vector<Rational> ad_weight;
  std::size_t next_id = 1;
  for (std::size_t q = 0; q < spec.queries; ++q) {
    const auto count = spec.min_ads_per_query + rng.uniform_index(span);
    for (std::size_t k = 0; k < count; ++k) {
      Ad a;
      a.id = "a" + std::to_string(next_id++);
      a.query = inst.queries.entries[q].id;
      a.bucket = 1 + rng.uniform_index(spec.buckets);
      a.bid = rng.pick(spec.bids);
      a.ctr = rng.pick(spec.ctrs);
      inst.ads.push_back(std::move(a));
      ad_weight.push_back(inst.queries.entries[q].probability);
    }
  }

  if (!spec.enforce) return inst;

  std::vector<Rational> mean;
  for (std::size_t z = 0; z < spec.buckets; ++z) mean.push_back(rng.pick(spec.ctrs));

  // Cells keyed by (bucket, bid, query); the query is blank for E2.
  std::map<std::tuple<std::size_t, Rational, std::string>,
           std::vector<std::size_t>>
      cells;
  for (std::size_t i = 0; i < inst.ads.size(); ++i) {
    const Ad& a = inst.ads[i];
    const std::string q = spec.enforce == Property::kE1 ? a.query : std::string();
    cells[{a.bucket, a.bid, q}].push_back(i);
  }
  for (const auto& [key, members] : cells) {
    fill_cell(inst.ads, members, ad_weight, mean[std::get<0>(key) - 1], spec.ctrs,
              rng);
  }
  return inst;
}

}  // namespace adcal
