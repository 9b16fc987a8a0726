#include <doctest.h>

#include "adcal/calibrate.hpp"
#include "adcal/errors.hpp"
#include "adcal/generators.hpp"
#include "adcal/properties.hpp"
#include "corpus.hpp"

using namespace adcal;

TEST_CASE("every fixture is a valid instance") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    CHECK(validate(paper_fixture(name)).empty());
  }
  CHECK(validate(paper_fixture("all_three_class(3)")).empty());
  CHECK(validate(paper_fixture("one_exponential:5")).empty());
  CHECK(validate(paper_fixture("si_not_nice(1/7)")).empty());
}

TEST_CASE("fixture names and parameters") {
  CHECK(paper_fixture("all_three_class").ads.size() == 21);
  CHECK(paper_fixture("all_three_class(2)").ads.size() == 5);
  CHECK(paper_fixture("all_three_class:2") == paper_fixture("all_three_class(2)"));
  CHECK(paper_fixture("one_exponential").buckets == 3);
  CHECK(paper_fixture("si_not_nice(1/10)").ads.back().bid == Rational(1, 10));
  CHECK(paper_fixture("si_not_nice").ads.back().bid == Rational(1, 100));
  CHECK_THROWS_AS(paper_fixture("nope"), InvalidArgument);
  CHECK_THROWS_AS(paper_fixture("all_three_class(0)"), InvalidArgument);
  CHECK_THROWS_AS(paper_fixture("all_three_class(x)"), InvalidArgument);
  CHECK_THROWS_AS(paper_fixture("all_three_class(2"), InvalidArgument);
  CHECK_THROWS_AS(paper_fixture("e2_not_si(2)"), InvalidArgument);
  CHECK_THROWS_AS(paper_fixture("si_not_nice(0)"), InvalidArgument);
}

TEST_CASE("fixture contents") {
  const auto fig1 = paper_fixture("fig1_many_fixed_points");
  REQUIRE(fig1.ads.size() == 4);
  CHECK(fig1.ads[1].bid == Rational(20, 3));
  CHECK(fig1.ads[3].bid == Rational(4));
  CHECK(fig1.mechanism == Mechanism::kAll);

  const auto nfp = paper_fixture("one_no_fixed_point");
  CHECK(nfp.queries.entries.size() == 4);
  for (const auto& a : nfp.ads) CHECK(a.bid == Rational(1));

  const auto expo = paper_fixture("one_exponential(4)");
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(expo.ads[i].bucket == i + 1);
    CHECK(expo.ads[i].ctr * expo.ads[i].bid == Rational(1));
  }
}

TEST_CASE("prefix families") {
  const auto fig1 =
      prefix_family({Rational(1, 10), Rational(1, 5), Rational(3, 10), Rational(2, 5)});
  CHECK(fig1 == paper_fixture("fig1_many_fixed_points"));

  const auto one = prefix_family({Rational(1, 2)});
  CHECK(one.ads.size() == 1);
  CHECK(one.ads[0].bid == Rational(2));
  CHECK(enumerate_fixed_points(one, 100).classes.size() == 2);

  std::vector<Rational> six;
  for (long long k = 1; k <= 6; ++k) six.emplace_back(k, 7);
  CHECK(enumerate_fixed_points(prefix_family(six), 100).classes.size() == 7);

  CHECK_THROWS_AS(prefix_family({}), InvalidArgument);
  CHECK_THROWS_AS(prefix_family({Rational(1, 2), Rational(1, 2)}), InvalidArgument);
  CHECK_THROWS_AS(prefix_family({Rational(1, 2), Rational(1, 3)}), InvalidArgument);
  CHECK_THROWS_AS(prefix_family({Rational(0)}), InvalidArgument);
}

TEST_CASE("random instances are deterministic and valid") {
  RandomSpec spec;
  spec.seed = 1;
  CHECK(random_instance(spec) == random_instance(spec));
  spec.seed = 2;
  const auto other = random_instance(spec);
  spec.seed = 1;
  CHECK_FALSE(random_instance(spec) == other);
  for (std::uint64_t i = 0; i < 300; ++i) {
    CHECK(validate(random_instance(corpus::general(i))).empty());
  }
}

TEST_CASE("enforced properties hold by construction") {
  RandomSpec spec;
  spec.seed = 1;
  spec.enforce = Property::kE2;
  CHECK(check_e2(random_instance(spec)).holds);
  spec.seed = 2;
  spec.enforce = Property::kE1;
  spec.mechanism = Mechanism::kOne;
  CHECK(check_e1(random_instance(spec)).holds);

  for (std::uint64_t i = 0; i < 300; ++i) {
    auto s = corpus::general(i);
    s.queries = 1 + i % 6;
    s.enforce = i % 2 ? Property::kE1 : Property::kE2;
    const auto inst = random_instance(s);
    CHECK(validate(inst).empty());
    if (s.enforce == Property::kE1) CHECK(check_e1(inst).holds);
    CHECK(check_e2(inst).holds);
  }
}

TEST_CASE("invalid random specs are rejected") {
  RandomSpec spec;
  spec.queries = 0;
  CHECK_THROWS_AS(random_instance(spec), InvalidArgument);
  spec = RandomSpec{};
  spec.bids.clear();
  CHECK_THROWS_AS(random_instance(spec), InvalidArgument);
  spec = RandomSpec{};
  spec.ctrs = {Rational(3, 2)};
  CHECK_THROWS_AS(random_instance(spec), InvalidArgument);
  spec = RandomSpec{};
  spec.min_ads_per_query = 3;
  spec.max_ads_per_query = 2;
  CHECK_THROWS_AS(random_instance(spec), InvalidArgument);
  spec = RandomSpec{};
  spec.enforce = Property::kSI;
  CHECK_THROWS_AS(random_instance(spec), InvalidArgument);
}
