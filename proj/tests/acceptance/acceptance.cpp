// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "adcal/calibrate.hpp"
#include "adcal/empirical.hpp"
#include "adcal/generators.hpp"
#include "adcal/metrics.hpp"
#include "adcal/optimize.hpp"
#include "adcal/properties.hpp"
#include "adcal/selection.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

using namespace adcal;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures; the first few are kept for the report line.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_.push_back(what);
  }

  Outcome outcome(const std::string& summary) const {
    std::ostringstream s;
    s << summary << "; " << checks_ - failures_ << "/" << checks_ << " checks";
    for (const auto& n : notes_) s << "; " << n;
    return {failures_ == 0, s.str()};
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::vector<std::string> notes_;
};

PredictionMap m(const char* text) { return PredictionMap::parse(text); }

std::string fmt(const std::optional<Rational>& r) { return r ? r->str() : "none"; }

Outcome fig1() {
  Tally t;
  const auto inst = paper_fixture("fig1_many_fixed_points");
  const std::vector<Rational> min_p{Rational(1, 10), Rational(3, 20), Rational(1, 5),
                                    Rational(1, 4)};
  const std::vector<Rational> ad_ev{Rational(0), Rational(1, 3), Rational(1, 2),
                                    Rational(3, 5)};
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& a = inst.ads[k];
    const Rational threshold = a.bid.inverse();
    t.expect(threshold == min_p[k], "min p " + threshold.str());
    const Rational value = a.ctr * a.bid - impression_cost(inst.mechanism);
    t.expect(value == ad_ev[k], "ad EV " + value.str());
    // Serving at the ad's threshold shows exactly ads 1..k+1.
    const auto f = PredictionMap::constant(1, threshold);
    const auto shown = show_distribution(inst, f);
    for (std::size_t j = 0; j < 4; ++j) {
      t.expect((shown.conditional[j].sign() > 0) == (j <= k), "prefix shape");
    }
    const auto observed = calibration_report(inst, f).buckets[0].observed;
    t.expect(observed == min_p[k], "prefix CTR " + fmt(observed));
  }
  const auto rep = enumerate_fixed_points(inst, 100);
  t.expect(rep.classes.size() == 5 && rep.total_classes == 5u,
           "classes " + std::to_string(rep.classes.size()));
  return t.outcome("fig1 columns and 5 fixed-point classes");
}

Outcome three_class() {
  Tally t;
  const auto inst = paper_fixture("all_three_class(10)");
  const auto half = m("1/2");
  t.expect(apply_t(inst, half) == half, "[1/2] not fixed");
  t.expect(expected_value(inst, half) == Rational(0), "EV at [1/2]");
  const auto best = optimal_map_all(inst);
  t.expect(best.ev == Rational(9), "optimal EV " + best.ev.str());
  const auto shown = show_distribution(inst, best.map);
  std::set<std::string> ids;
  for (std::size_t i = 0; i < inst.ads.size(); ++i) {
    if (shown.conditional[i].sign() > 0) ids.insert(inst.ads[i].id);
  }
  std::set<std::string> expected{"A"};
  for (int i = 1; i <= 10; ++i) expected.insert("B" + std::to_string(i));
  t.expect(ids == expected, "shown set");
  const auto cal = calibration_report(inst, best.map);
  t.expect(!cal.self_calibrated(), "optimal map is calibrated");
  t.expect(cal.buckets[0].observed == Rational(21, 22),
           "observed " + fmt(cal.buckets[0].observed));
  return t.outcome("EV 0 fixed point, optimum 9 on A+B, observed 21/22");
}

Outcome two_cycle() {
  Tally t;
  const auto inst = paper_fixture("all_no_fixed_point");
  const auto trace = iterate_t(inst, m("1/2"), 100);
  t.expect(trace.outcome == TraceOutcome::kCycle && trace.period == 2, "no 2-cycle");
  std::set<std::string> cycle;
  for (std::size_t j = 0; j < trace.period; ++j) {
    cycle.insert(trace.maps[trace.start + j].str());
  }
  t.expect(cycle == std::set<std::string>{"2/5", "7/10"}, "cycle members");
  for (const auto& c : enumerate_fixed_points(inst, 100).classes) {
    t.expect(!c.shows_ads, "showing fixed point " + c.representative.str());
  }
  return t.outcome("period-2 cycle over {2/5, 7/10}, no showing fixed point");
}

Outcome one_no_fixed_point() {
  Tally t;
  const auto inst = paper_fixture("one_no_fixed_point");
  const std::vector<std::pair<const char*, std::pair<Rational, Rational>>> regimes{
      {"1/2,1/4", {Rational(13, 30), Rational(3, 5)}},
      {"1/4,1/2", {Rational(1, 2), Rational(7, 15)}},
      {"1/2,1/2", {Rational(9, 20), Rational(1, 2)}}};
  for (const auto& [map, pair] : regimes) {
    const auto cal = calibration_report(inst, m(map));
    t.expect(cal.buckets[0].observed == pair.first && cal.buckets[1].observed == pair.second,
             std::string("regime ") + map);
  }
  std::string found;
  std::size_t showing = 0;
  for (const auto& c : enumerate_fixed_points(inst, 100).classes) {
    if (!c.shows_ads) continue;
    ++showing;
    found += (found.empty() ? "" : " ") + std::string("[") + c.representative.str() + "]";
  }
  t.expect(showing == 0, "self-calibrated maps that show ads: " + found);
  return t.outcome("three regime CTR pairs, no self-calibrated configuration");
}

Outcome exponential() {
  Tally t;
  for (std::size_t n : {2u, 3u, 4u}) {
    const auto rep = enumerate_fixed_points(one_exponential(n), 1000);
    t.expect(rep.classes.size() == (std::size_t{1} << n),
             "n=" + std::to_string(n) + " classes " + std::to_string(rep.classes.size()));
  }
  return t.outcome("2^n fixed-point classes for n in {2,3,4}");
}

Outcome mfas() {
  Tally t;
  const auto begin = std::chrono::steady_clock::now();
  std::vector<Tournament> tournaments = Tournament::all(3);
  for (std::uint64_t s = 0; s < 50; ++s) {
    tournaments.push_back(Tournament::random(3 + s % 4, 700 + s));
  }
  for (const auto& tour : tournaments) {
    const auto inst = mfas_to_instance(tour);
    const auto best = optimal_map_one_exact(inst, kDefaultConfigBudget);
    const Rational pairs(static_cast<long long>(inst.queries.entries.size()));
    const Rational via = pairs * (Rational(1) - best.ev);
    const auto exact = mfas_exact(tour).upsets;
    t.expect(via == Rational(static_cast<long long>(exact)) && exact == oracle::mfas_dp(tour),
             "n=" + std::to_string(tour.players()) + " reduction " + via.str() + " vs " +
                 std::to_string(exact));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
  t.expect(secs <= 30.0, "runtime " + std::to_string(secs) + " s");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%zu tournaments in %.2f s", tournaments.size(), secs);
  return t.outcome(buf);
}

Outcome e2_iff_si() {
  Tally t;
  std::size_t holds = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto inst = random_instance(corpus::all_mixed(i));
    const bool e2 = check_e2(inst).holds;
    holds += e2;
    t.expect(e2 == check_si(inst).holds, "instance " + std::to_string(i));
  }
  return t.outcome("200 ALL instances, E2 held on " + std::to_string(holds));
}

bool zero_residuals(const ProblemInstance& inst, const PredictionMap& f) {
  for (const auto& b : calibration_report(inst, f).buckets) {
    if (b.residual && !b.residual->is_zero()) return false;
  }
  return true;
}

Outcome baseline_all() {
  Tally t;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto inst = random_instance(corpus::all_e2(i));
    const auto f = baseline_map(inst);
    t.expect(zero_residuals(inst, f), "residual on " + std::to_string(i));
    t.expect(expected_value(inst, f) == optimal_map_all(inst).ev,
             "EV gap on " + std::to_string(i));
  }
  return t.outcome("100 E2 ALL instances");
}

Outcome baseline_one() {
  Tally t;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto inst = random_instance(corpus::one_e1(i));
    const auto f = baseline_map(inst);
    t.expect(zero_residuals(inst, f), "residual on " + std::to_string(i));
    t.expect(expected_value(inst, f) == optimal_map_one_exact(inst, kDefaultConfigBudget).ev,
             "EV gap on " + std::to_string(i));
  }
  return t.outcome("100 E1 ONE instances");
}

Outcome separations() {
  Tally t;
  const auto a = paper_fixture("si_not_e1");
  t.expect(check_si(a).holds, "si_not_e1: SI fails");
  t.expect(!check_e1(a).holds, "si_not_e1: E1 holds");

  const auto b = paper_fixture("e2_not_si");
  t.expect(b.mechanism == Mechanism::kOne, "e2_not_si mechanism");
  t.expect(check_e2(b).holds, "e2_not_si: E2 fails");
  const auto si = check_si(b);
  t.expect(!si.holds && si.witness && si.witness->lhs == Rational(1, 10) &&
               si.witness->rhs == Rational(3, 20),
           "e2_not_si witness");

  const auto c = paper_fixture("si_not_nice(1/100)");
  t.expect(c.mechanism == Mechanism::kOne, "si_not_nice mechanism");
  t.expect(check_si(c).holds, "si_not_nice: SI fails");
  const Rational base = expected_value(c, baseline_map(c));
  const Rational best = optimal_map_one_exact(c, kDefaultConfigBudget).ev;
  t.expect(base < best, "baseline " + base.str() + " vs optimum " + best.str());
  return t.outcome("si_not_e1, e2_not_si (1/10 vs 3/20), si_not_nice(1/100)");
}

Outcome invariants() {
  Tally t;
  Rng rng(4242);
  std::size_t e1_instances = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const auto inst = random_instance(corpus::general(i));
    const std::string tag = " on " + std::to_string(i);

    // Total expectation under Pr_C and under Pr_f.
    std::vector<AdDistribution> dists{pr_candidate(inst)};
    std::vector<PredictionMap> maps;
    for (int k = 0; k < 12; ++k) maps.push_back(corpus::random_map(inst, rng));
    for (const auto& f : maps) {
      if (show_distribution(inst, f).any_shown()) dists.push_back(pr_shown(inst, f));
    }
    for (const auto& d : dists) {
      Rational total;
      for (std::size_t z = 1; z <= inst.buckets; ++z) {
        const auto mean = conditional_ctr(d, inst, {z, {}, {}});
        if (mean) total += bucket_mass(d, inst, z) * *mean;
      }
      t.expect(total == mean_ctr(d, inst), "total expectation" + tag);
    }

    // EV is a function of the selection signature.
    std::map<std::string, Rational> ev_by_signature;
    for (const auto& f : maps) {
      const Rational v = expected_value(inst, f);
      t.expect(v == oracle::ev(inst, f), "EV oracle" + tag);
      const auto [it, fresh] = ev_by_signature.emplace(selection_signature(inst, f), v);
      if (!fresh) t.expect(it->second == v, "EV differs within a signature" + tag);
    }

    // Scaling every bid leaves the ONE winners unchanged.
    auto one = inst;
    one.mechanism = Mechanism::kOne;
    auto scaled = one;
    const Rational c = rng.pick(std::vector<Rational>{Rational(1, 3), Rational(5, 2),
                                                      Rational(7)});
    for (auto& ad : scaled.ads) ad.bid *= c;
    for (const auto& f : maps) {
      t.expect(show_distribution(one, f).conditional ==
                   show_distribution(scaled, f).conditional,
               "bid scaling" + tag);
    }

    // Under ALL, T(f)(z) depends on f(z) only.
    auto all = inst;
    all.mechanism = Mechanism::kAll;
    for (std::size_t k = 0; k + 1 < maps.size(); k += 2) {
      const auto& f = maps[k];
      auto g = f;
      const std::size_t moved = rng.uniform_index(inst.buckets);
      g.values[moved] = maps[k + 1].values[moved];
      const auto tf = apply_t(all, f);
      const auto tg = apply_t(all, g);
      for (std::size_t z = 0; z < inst.buckets; ++z) {
        if (z != moved) t.expect(tf.values[z] == tg.values[z], "T decomposition" + tag);
      }
    }

    if (check_e1(inst).holds) {
      ++e1_instances;
      t.expect(check_e2(inst).holds, "E1 without E2" + tag);
    }
  }
  return t.outcome("500 instances, E1 held on " + std::to_string(e1_instances));
}

Outcome empirical() {
  const auto inst = paper_fixture("fig1_many_fixed_points");
  const auto f = m("1/4");
  const auto exact = apply_t(inst, f);
  const std::uint64_t n = 100000;
  std::size_t passed = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto log = simulate_batch(inst, f, n, seed);
    const auto counts = bucket_counts(log, inst.buckets);
    bool ok = true;
    for (std::size_t z = 0; z < inst.buckets; ++z) {
      ok = ok && counts.impressions[z] > 0 &&
           oracle::within_three_sigma(counts.clicks[z], counts.impressions[z],
                                      exact.values[z]);
    }
    // The estimator itself must agree with the raw counts.
    ok = ok && empirical_t(f, log).values[0] ==
                   Rational(static_cast<long long>(counts.clicks[0]),
                            static_cast<long long>(counts.impressions[0]));
    passed += ok;
  }
  return {passed >= 19, std::to_string(passed) + "/20 seeds within 3 sigma at n=1e5"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"fig1 reproduction", fig1},
      {"three-class ALL instance", three_class},
      {"ALL two-cycle", two_cycle},
      {"ONE instance without a fixed point", one_no_fixed_point},
      {"exponentially many ONE fixed points", exponential},
      {"MFAS reduction", mfas},
      {"E2 iff SI under ALL", e2_iff_si},
      {"baseline map under E2 (ALL)", baseline_all},
      {"baseline map under E1 (ONE)", baseline_one},
      {"property separations", separations},
      {"property invariants", invariants},
      {"empirical consistency", empirical},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
