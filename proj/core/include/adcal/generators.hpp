#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adcal/instance.hpp"
#include "adcal/properties.hpp"

namespace adcal {

// Named example instances. A name may carry one parameter, written either
// "all_three_class(10)" or "all_three_class:10":
//   fig1_many_fixed_points    one query, four ALL ads with five fixed points
//   all_three_class(n)        A (1/2, 2), n x (1, 19/10), n x (0, 9/5); n=10
//   all_no_fixed_point        (7/10, 4), (1/10, 2) in one bucket
//   one_q1_counterexample     ads A-D over two queries, ONE
//   one_no_fixed_point        ads A-F over four queries, ONE
//   one_exponential(n)        ad i alone in bucket i, p_i = 1/b_i; n=3
//   si_not_e1                 two mirrored queries sharing one bucket, ONE
//   e2_not_si                 ads A-E over two queries, ONE
//   si_not_nice(eps)          ads A-D plus eps-scaled mirrors, ONE; eps=1/100
// Throws InvalidArgument for an unknown name or a bad parameter.
ProblemInstance paper_fixture(std::string_view name);

// Every name accepted by paper_fixture, without parameters.
const std::vector<std::string>& fixture_names();

ProblemInstance all_three_class(std::size_t n);
ProblemInstance one_exponential(std::size_t n);
ProblemInstance si_not_nice(const Rational& epsilon);

// Single-query ALL instance, one bucket, ad i with p_i = ctrs[i-1] and
// b_i = i / (p_1 + ... + p_i). Its fixed points are the n bid prefixes and
// the empty map. Throws InvalidArgument unless ctrs is strictly increasing
// within (0, 1].
ProblemInstance prefix_family(const std::vector<Rational>& ctrs);

struct RandomSpec {
  std::uint64_t seed = 1;
  std::size_t queries = 3;
  std::size_t min_ads_per_query = 1;
  std::size_t max_ads_per_query = 3;
  std::size_t buckets = 2;
  Mechanism mechanism = Mechanism::kAll;
  std::vector<Rational> bids{Rational(1), Rational(2), Rational(3)};
  std::vector<Rational> ctrs{Rational(1, 10), Rational(1, 5), Rational(3, 10),
                             Rational(2, 5), Rational(1, 2)};
  // kE1 or kE2; kSI is rejected.
  std::optional<Property> enforce;
};

// Deterministic in `spec`. Query probabilities are drawn weights 1..4,
// normalized. With enforce set, every bucket gets a mean drawn from the ctr
// grid and each cell that the property constrains (bucket x bid for E2,
// bucket x bid x query for E1) is filled with CTRs that average exactly to
// that mean: ads are paired with offsetting deviations, and a leftover ad
// takes the mean itself. Throws InvalidArgument for an invalid spec.
ProblemInstance random_instance(const RandomSpec& spec);

}  // namespace adcal
