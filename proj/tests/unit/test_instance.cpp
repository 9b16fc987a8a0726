#include <doctest.h>

#include <set>

#include "adcal/errors.hpp"
#include "adcal/generators.hpp"
#include "adcal/instance.hpp"
#include "adcal/optimize.hpp"
#include "adcal/rng.hpp"
#include "corpus.hpp"

using namespace adcal;

namespace {

ProblemInstance two_queries() {
  ProblemInstance inst;
  inst.buckets = 2;
  inst.mechanism = Mechanism::kOne;
  inst.queries.entries = {{"q1", Rational(1, 2)}, {"q2", Rational(1, 2)}};
  inst.ads = {{"a", "q1", Rational(1, 2), Rational(2), 1},
              {"b", "q2", Rational(1, 3), Rational(1), 2}};
  return inst;
}

}  // namespace

TEST_CASE("a well-formed instance has no violations") {
  CHECK(validate(two_queries()).empty());
  CHECK_NOTHROW(require_valid(two_queries()));
}

TEST_CASE("probabilities that do not sum to one are reported on the distribution") {
  auto inst = two_queries();
  inst.queries.entries[1].probability = Rational(1, 4);
  const auto v = validate(inst);
  REQUIRE(v.size() == 1);
  CHECK(v[0].path == "queries");
  CHECK_THROWS_AS(require_valid(inst), InvalidArgument);
}

TEST_CASE("a bucket beyond K is reported on that ad") {
  auto inst = two_queries();
  inst.ads[1].bucket = 3;
  const auto v = validate(inst);
  REQUIRE(v.size() == 1);
  CHECK(v[0].path == "ads[b].bucket");
}

TEST_CASE("every kind of corruption is detected") {
  adcal::Rng rng(7);
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto inst = random_instance(corpus::general(i));
    REQUIRE(validate(inst).empty());
    auto& ad = inst.ads[rng.uniform_index(inst.ads.size())];
    switch (i % 8) {
      case 0: ad.ctr = Rational(11, 10); break;
      case 1: ad.ctr = Rational(-1, 10); break;
      case 2: ad.bid = Rational(0); break;
      case 3: ad.bucket = 0; break;
      case 4: ad.bucket = inst.buckets + 1; break;
      case 5: ad.query = "nowhere"; break;
      case 6: inst.ads.push_back(inst.ads.front()); break;
      case 7: inst.queries.entries.front().probability += Rational(1, 97); break;
    }
    CAPTURE(i);
    CHECK_FALSE(validate(inst).empty());
  }
  auto inst = two_queries();
  inst.buckets = 0;
  CHECK_FALSE(validate(inst).empty());
  inst = two_queries();
  inst.queries.entries.push_back({"q1", Rational(0)});
  CHECK(validate(inst).size() >= 2);
}

TEST_CASE("candidates returns a query's ads in input order") {
  const auto q4 = paper_fixture("all_no_fixed_point");
  const auto c = candidates(q4, "q1");
  REQUIRE(c.size() == 2);
  CHECK(c[0].ctr == Rational(7, 10));
  CHECK(c[1].ctr == Rational(1, 10));

  auto inst = two_queries();
  inst.queries.entries = {{"q1", Rational(1, 3)}, {"q2", Rational(1, 3)},
                          {"q3", Rational(1, 3)}};
  CHECK(candidates(inst, "q3").empty());
  CHECK_THROWS_AS(candidates(inst, "q9"), InvalidArgument);

  Tournament cyclic(3);
  cyclic.set_winner(3, 1);
  const auto mfas = mfas_to_instance(cyclic);
  const auto pair = candidates(mfas, "q1_2");
  REQUIRE(pair.size() == 2);
  CHECK(pair[0].bucket == 1);
  CHECK(pair[0].ctr == Rational(1));
  CHECK(pair[1].bucket == 2);
  CHECK(pair[1].ctr == Rational(0));
}

TEST_CASE("candidates partition the ad list") {
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto inst = random_instance(corpus::general(i));
    std::multiset<std::string> seen;
    for (const auto& q : inst.queries.entries) {
      for (const auto& a : candidates(inst, q.id)) seen.insert(a.id);
    }
    std::multiset<std::string> all;
    for (const auto& a : inst.ads) all.insert(a.id);
    CHECK(seen == all);
  }
}

TEST_CASE("prediction maps parse, print and check their range") {
  const auto f = PredictionMap::parse("1/4,3/10,0,1");
  CHECK(f.size() == 4);
  CHECK(f.at(2) == Rational(3, 10));
  CHECK(f.str() == "1/4,3/10,0,1");
  CHECK_THROWS_AS(PredictionMap::parse("1/2,3/2"), ParseError);
  CHECK_THROWS_AS(PredictionMap::parse("-1/2"), ParseError);
  CHECK_THROWS_AS(PredictionMap::parse(""), ParseError);
  CHECK_THROWS_AS(require_map_size(two_queries(), PredictionMap::zeros(3)),
                  InvalidArgument);
}

TEST_CASE("mechanism names") {
  CHECK(parse_mechanism("ONE") == Mechanism::kOne);
  CHECK(parse_mechanism("ALL") == Mechanism::kAll);
  CHECK(to_string(Mechanism::kOne) == "ONE");
  CHECK_THROWS_AS(parse_mechanism("one"), InvalidArgument);
}
