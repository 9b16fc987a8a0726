#include <doctest.h>

#include <sstream>

#include "adcal/calibrate.hpp"
#include "adcal/empirical.hpp"
#include "adcal/errors.hpp"
#include "adcal/generators.hpp"
#include "adcal/properties.hpp"
#include "adcal/selection.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

using namespace adcal;

namespace {

PredictionMap m(const char* text) { return PredictionMap::parse(text); }

}  // namespace

TEST_CASE("nothing is logged when nothing shows") {
  const auto inst = paper_fixture("fig1_many_fixed_points");
  const auto log = simulate_batch(inst, m("0"), 1000, 1);
  CHECK(log.records.empty());
  CHECK(log.queries == 1000);
  CHECK(empirical_t(m("1/3"), log) == m("1/3"));
}

TEST_CASE("simulation is a pure function of its seed") {
  const auto inst = paper_fixture("one_no_fixed_point");
  const auto a = simulate_batch(inst, m("1/2,1/2"), 5000, 9);
  CHECK(a == simulate_batch(inst, m("1/2,1/2"), 5000, 9));
  CHECK_FALSE(a == simulate_batch(inst, m("1/2,1/2"), 5000, 10));
  CHECK(run_loop(inst, m("1/2,1/2"), 3, 2000, 4) == run_loop(inst, m("1/2,1/2"), 3, 2000, 4));
}

TEST_CASE("records only show ads the map selects") {
  const auto inst = paper_fixture("one_no_fixed_point");
  const auto f = m("1/2,2/5");
  const auto shown = show_distribution(inst, f);
  const auto log = simulate_batch(inst, f, 2000, 3);
  CHECK(log.records.size() == 2000);
  for (const auto& r : log.records) {
    std::size_t k = 0;
    while (inst.ads[k].id != r.ad) ++k;
    CHECK(shown.conditional[k].sign() > 0);
    CHECK(inst.ads[k].query == r.query);
    CHECK(inst.ads[k].bucket == r.bucket);
  }
}

TEST_CASE("empirical T is clicks over impressions") {
  ClickLog log;
  for (int i = 0; i < 100; ++i) log.records.push_back({"q", "a", 1, i < 40});
  CHECK(empirical_t(m("1/2,1/3"), log) == m("2/5,1/3"));
  log.records.push_back({"q", "a", 3, true});
  CHECK_THROWS_AS(empirical_t(m("1/2,1/3"), log), InvalidArgument);
}

TEST_CASE("impression shares and click rates are binomially consistent") {
  const auto inst = paper_fixture("fig1_many_fixed_points");
  const std::uint64_t n = 100000;
  const auto log = simulate_batch(inst, m("1/4"), n, 2024);
  REQUIRE(log.records.size() == 4 * n);
  std::vector<std::uint64_t> clicks(4);
  for (const auto& r : log.records) {
    if (r.clicked) ++clicks[std::stoul(r.ad) - 1];
  }
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(oracle::within_three_sigma(clicks[k], n, inst.ads[k].ctr));
  }

  // Under ONE with a four-way tie, each ad takes a quarter of the traffic.
  const auto expo = paper_fixture("one_exponential(4)");
  const auto tie = simulate_batch(expo, single_query_one_map(expo), n, 5);
  std::vector<std::uint64_t> shows(4);
  for (const auto& r : tie.records) ++shows[r.bucket - 1];
  for (auto s : shows) CHECK(oracle::within_three_sigma(s, n, Rational(1, 4)));
}

TEST_CASE("empirical T approaches exact T as batches grow") {
  for (const char* name : {"fig1_many_fixed_points", "one_no_fixed_point", "e2_not_si"}) {
    const auto inst = paper_fixture(name);
    const auto f = PredictionMap::constant(inst.buckets, Rational(1, 2));
    const auto exact = apply_t(inst, f);
    for (std::uint64_t n : {1000u, 10000u, 100000u}) {
      const auto log = simulate_batch(inst, f, n, n + 17);
      const auto counts = bucket_counts(log, inst.buckets);
      for (std::size_t z = 0; z < inst.buckets; ++z) {
        if (counts.impressions[z] == 0) continue;
        CAPTURE(name);
        CAPTURE(n);
        CHECK(oracle::within_three_sigma(counts.clicks[z], counts.impressions[z],
                                         exact.values[z]));
      }
    }
  }
}

TEST_CASE("the sampled loop on the two-ad ALL instance keeps alternating") {
  const auto maps = run_loop(paper_fixture("all_no_fixed_point"), m("1/2"), 6, 200000, 1);
  REQUIRE(maps.size() == 7);
  for (std::size_t k = 1; k < maps.size(); ++k) {
    const double target = k % 2 == 1 ? 0.4 : 0.7;
    CHECK(std::abs(maps[k].at(1).to_double() - target) < 0.01);
  }
}

TEST_CASE("the sampled loop stays near the baseline map under E2") {
  for (std::uint64_t i = 0; i < 5; ++i) {
    const auto inst = random_instance(corpus::all_e2(i));
    const auto f = baseline_map(inst);
    const auto maps = run_loop(inst, f, 3, 100000, i);
    for (const auto& g : maps) {
      for (std::size_t z = 1; z <= inst.buckets; ++z) {
        CHECK(std::abs(g.at(z).to_double() - f.at(z).to_double()) < 0.02);
      }
    }
  }
}

TEST_CASE("a single-query batch runs") {
  const auto maps = run_loop(paper_fixture("one_no_fixed_point"), m("1/2,1/2"), 3, 1, 1);
  CHECK(maps.size() == 4);
  CHECK_THROWS_AS(run_loop(paper_fixture("one_no_fixed_point"), m("1/2,1/2"), 0, 1, 1),
                  InvalidArgument);
}

TEST_CASE("click logs round-trip through text") {
  const auto inst = paper_fixture("e2_not_si");
  const auto log = simulate_batch(inst, m("1/2,1"), 500, 77);
  std::stringstream io;
  write_click_log(io, log);
  const auto text = io.str();
  CHECK(text.rfind("#map=1/2,1 seed=77 queries=500\n", 0) == 0);
  CHECK(read_click_log(io) == log);

  std::istringstream bad1("q\ta\t1\t1\n");
  CHECK_THROWS_AS(read_click_log(bad1), ParseError);
  std::istringstream bad2("#map=1/2 seed=1 queries=2\nq\ta\t1\n");
  CHECK_THROWS_AS(read_click_log(bad2), ParseError);
  std::istringstream bad3("#map=1/2 seed=1 queries=2\nq\ta\t1\t2\n");
  CHECK_THROWS_AS(read_click_log(bad3), ParseError);
  std::istringstream bad4("#map=1/2 seed=1\n");
  CHECK_THROWS_AS(read_click_log(bad4), ParseError);
}
