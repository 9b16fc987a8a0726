#include "app.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "adcal/calibrate.hpp"
#include "adcal/empirical.hpp"
#include "adcal/errors.hpp"
#include "adcal/generators.hpp"
#include "adcal/metrics.hpp"
#include "adcal/optimize.hpp"
#include "adcal/properties.hpp"
#include "adcal/selection.hpp"
#include "instance_io.hpp"
#include "report.hpp"

namespace adcal::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string instance_path;
  std::string fixture;
  std::string format = "human";
  std::uint64_t seed = 1;
  std::uint64_t budget = kDefaultConfigBudget;
};

ProblemInstance load_input(const Globals& g) {
  if (!g.fixture.empty()) return paper_fixture(g.fixture);
  if (!g.instance_path.empty()) return load_instance(g.instance_path);
  throw UsageError("this command needs --instance <path> or --fixture <name>");
}

ProblemInstance load_valid(const Globals& g) {
  auto inst = load_input(g);
  require_valid(inst);
  return inst;
}

PredictionMap map_arg(const ProblemInstance& inst, const std::string& text) {
  auto f = PredictionMap::parse(text);
  require_map_size(inst, f);
  return f;
}

// Writes `text` to `path` via a temporary file and rename, so readers never
// see a partial file.
void write_file(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
    if (!out.flush()) throw UsageError("cannot write " + path);
  }
  std::filesystem::rename(tmp, path);
}

void add_calibration(Report& r, const ProblemInstance& inst, const PredictionMap& f) {
  const auto cal = calibration_report(inst, f);
  for (std::size_t z = 1; z <= cal.buckets.size(); ++z) {
    const auto& b = cal.buckets[z - 1];
    const std::string key = "bucket." + std::to_string(z);
    r.add(key + ".predicted", b.predicted);
    if (b.observed) {
      r.add(key + ".observed", *b.observed);
      r.add(key + ".residual", *b.residual);
    } else {
      r.add(key + ".observed", "none");
    }
  }
  r.add("self_calibrated", cal.self_calibrated());
}

void add_map_summary(Report& r, const ProblemInstance& inst, const PredictionMap& f) {
  r.add("map", f.str());
  r.add("ev", expected_value(inst, f));
  add_calibration(r, inst, f);
}

void add_verdict(Report& r, const PropertyVerdict& v) {
  std::string key(to_string(v.property));
  for (auto& c : key) c = static_cast<char>(std::tolower(c));
  r.add(key, std::string(v.holds ? "holds" : "fails"));
  if (!v.witness) return;
  const auto& w = *v.witness;
  r.add(key + ".identity", w.identity);
  r.add(key + ".bucket", static_cast<std::uint64_t>(w.bucket));
  if (w.bid) r.add(key + ".bid", *w.bid);
  if (w.query) r.add(key + ".query", *w.query);
  r.add(key + ".lhs", w.lhs);
  r.add(key + ".rhs", w.rhs);
  if (w.lhs_map) r.add(key + ".lhs_map", w.lhs_map->str());
  if (w.rhs_map) r.add(key + ".rhs_map", w.rhs_map->str());
}

// "1>2,3>1" sets individual results on top of the transitive tournament.
Tournament tournament_arg(std::size_t players, const std::string& edges,
                          std::uint64_t seed) {
  if (players < 2) throw UsageError("--players must be at least 2");
  if (edges.empty()) return Tournament::random(players, seed);
  Tournament t(players);
  std::istringstream in(edges);
  for (std::string item; std::getline(in, item, ',');) {
    const auto gt = item.find('>');
    if (gt == std::string::npos) throw UsageError("edge '" + item + "' is not w>l");
    try {
      t.set_winner(std::stoul(item.substr(0, gt)), std::stoul(item.substr(gt + 1)));
    } catch (const std::logic_error&) {
      throw UsageError("bad edge '" + item + "'");
    }
  }
  return t;
}

std::vector<Rational> grid_arg(const std::string& text) {
  return PredictionMap::parse(text).values;
}

std::vector<Rational> bid_grid_arg(const std::string& text) {
  std::vector<Rational> out;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    out.push_back(Rational::parse(item));
  }
  return out;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact ad-auction calibration toolkit", "adcal"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  auto* inst_opt = app.add_option("--instance", g.instance_path, "Instance file");
  auto* fix_opt = app.add_option("--fixture", g.fixture, "Built-in fixture name");
  inst_opt->excludes(fix_opt);
  app.add_option("--format", g.format, "Report format")
      ->check(CLI::IsMember({"human", "machine"}));
  app.add_option("--seed", g.seed, "Seed for random tournaments, instances and sampling");
  app.add_option("--budget", g.budget, "Configuration budget for exhaustive ONE searches")
      ->check(CLI::PositiveNumber);

  std::function<std::optional<Report>()> action;
  int domain_exit = kExitOk;  // set by commands whose answer is a failure

  auto* validate_cmd = app.add_subcommand("validate", "Check an instance's invariants");
  validate_cmd->callback([&] {
    action = [&]() -> std::optional<Report> {
      const auto inst = load_input(g);
      const auto violations = validate(inst);
      Report r("validate");
      r.add("valid", violations.empty());
      r.add("violations", static_cast<std::uint64_t>(violations.size()));
      for (std::size_t i = 0; i < violations.size(); ++i) {
        const std::string key = "violation." + std::to_string(i + 1);
        r.add(key + ".path", violations[i].path);
        r.add(key + ".message", violations[i].message);
      }
      if (!violations.empty()) domain_exit = kExitDomain;
      return r;
    };
  });

  std::string map_text;
  auto* ev = app.add_subcommand("ev", "Expected value and calibration of a map");
  ev->add_option("--map", map_text, "Prediction map, e.g. 1/4,3/10")->required();
  ev->callback([&] {
    action = [&]() -> std::optional<Report> {
      const auto inst = load_valid(g);
      const auto f = map_arg(inst, map_text);
      Report r("ev");
      add_map_summary(r, inst, f);
      r.add("signature", selection_signature(inst, f));
      return r;
    };
  });

  std::string start_text;
  std::size_t max_steps = 100;
  auto* calibrate = app.add_subcommand("calibrate", "Iterate T until it repeats");
  calibrate->add_option("--start", start_text, "Initial map f0 (default: E_C[p|z])");
  calibrate->add_option("--max-steps", max_steps, "Maximum applications of T")
      ->check(CLI::PositiveNumber);
  calibrate->callback([&] {
    action = [&]() -> std::optional<Report> {
      const auto inst = load_valid(g);
      const auto f0 = start_text.empty() ? baseline_map(inst) : map_arg(inst, start_text);
      const auto trace = iterate_t(inst, f0, max_steps);
      Report r("calibrate");
      r.add("outcome", std::string(to_string(trace.outcome)));
      r.add("steps", static_cast<std::uint64_t>(trace.maps.size() - 1));
      for (std::size_t k = 0; k < trace.maps.size(); ++k) {
        r.add("step." + std::to_string(k), trace.maps[k].str());
      }
      if (trace.outcome != TraceOutcome::kBudgetExhausted) {
        r.add("cycle_start", static_cast<std::uint64_t>(trace.start));
        r.add("period", static_cast<std::uint64_t>(trace.period));
        for (std::size_t j = 0; j < trace.period; ++j) {
          r.add("cycle." + std::to_string(j + 1), trace.maps[trace.start + j].str());
        }
      }
      return r;
    };
  });

  std::size_t class_limit = 1000;
  auto* fixed = app.add_subcommand("fixed-points", "Enumerate fixed-point classes of T");
  fixed->add_option("--limit", class_limit, "Maximum classes to list")
      ->check(CLI::PositiveNumber);
  fixed->callback([&] {
    action = [&]() -> std::optional<Report> {
      const auto inst = load_valid(g);
      const auto rep = enumerate_fixed_points(inst, class_limit, g.budget);
      Report r("fixed-points");
      r.add("classes", static_cast<std::uint64_t>(rep.classes.size()));
      if (rep.total_classes) {
        r.add("total", *rep.total_classes);
      } else {
        r.add("total", "unknown");
      }
      r.add("truncated", rep.truncated);
      for (std::size_t z = 0; z < rep.bucket_options.size(); ++z) {
        std::string opts;
        for (const auto& o : rep.bucket_options[z]) {
          if (!opts.empty()) opts += ",";
          opts += std::to_string(o.groups) + ":" + o.value.fraction();
        }
        r.add("bucket." + std::to_string(z + 1) + ".options", opts);
      }
      for (std::size_t i = 0; i < rep.classes.size(); ++i) {
        const auto& c = rep.classes[i];
        const std::string key = "class." + std::to_string(i + 1);
        r.add(key + ".map", c.representative.str());
        r.add(key + ".shows_ads", c.shows_ads);
        r.add(key + ".ev", c.ev);
        r.add(key + ".signature", c.signature);
      }
      return r;
    };
  });

  auto* optimize = app.add_subcommand("optimize", "Efficiency-maximizing map");
  optimize->callback([&] {
    action = [&]() -> std::optional<Report> {
      const auto inst = load_valid(g);
      const auto best = inst.mechanism == Mechanism::kAll
                            ? optimal_map_all(inst)
                            : optimal_map_one_exact(inst, g.budget);
      Report r("optimize");
      add_map_summary(r, inst, best.map);
      return r;
    };
  });

  auto* props = app.add_subcommand("check-props", "Check properties E1, E2 and SI");
  props->callback([&] {
    action = [&]() -> std::optional<Report> {
      const auto inst = load_valid(g);
      Report r("check-props");
      add_verdict(r, check_e1(inst));
      add_verdict(r, check_e2(inst));
      add_verdict(r, check_si(inst, g.budget));
      return r;
    };
  });

  std::string method = "auto";
  auto* nice = app.add_subcommand("nice-map", "Candidate self-calibrated map");
  nice->add_option("--method", method, "baseline, single-query or auto")
      ->check(CLI::IsMember({"auto", "baseline", "single-query"}));
  nice->callback([&] {
    action = [&]() -> std::optional<Report> {
      const auto inst = load_valid(g);
      std::string used = method;
      if (used == "auto") {
        used = inst.mechanism == Mechanism::kOne && inst.queries.entries.size() == 1
                   ? "single-query"
                   : "baseline";
      }
      const auto f =
          used == "baseline" ? baseline_map(inst) : single_query_one_map(inst);
      Report r("nice-map");
      r.add("method", used);
      add_map_summary(r, inst, f);
      return r;
    };
  });

  std::size_t players = 3;
  std::string edges;
  std::string out_path;
  auto tournament_options = [&](CLI::App* sub) {
    sub->add_option("--players", players, "Number of players");
    sub->add_option("--edges", edges,
                    "Results as winner>loser pairs over the transitive order "
                    "(default: random tournament from --seed)");
  };

  auto* reduce = app.add_subcommand("reduce-mfas", "Encode a tournament as a ONE instance");
  tournament_options(reduce);
  reduce->add_option("--out", out_path, "Write the instance here instead of stdout");
  reduce->callback([&] {
    action = [&]() -> std::optional<Report> {
      const auto t = tournament_arg(players, edges, g.seed);
      const auto inst = mfas_to_instance(t);
      Report r("reduce-mfas");
      r.add("players", static_cast<std::uint64_t>(t.players()));
      r.add("queries", static_cast<std::uint64_t>(inst.queries.entries.size()));
      r.add("ads", static_cast<std::uint64_t>(inst.ads.size()));
      if (out_path.empty()) {
        out << emit_instance_text(inst);
        return std::nullopt;
      }
      write_file(out_path, emit_instance_text(inst));
      r.add("instance", out_path);
      return r;
    };
  });

  bool verify = false;
  auto* mfas = app.add_subcommand("mfas", "Minimum feedback arc set of a tournament");
  tournament_options(mfas);
  mfas->add_flag("--verify", verify,
                 "Also solve the ONE reduction and compare pairs*(1-EV*)");
  mfas->callback([&] {
    action = [&]() -> std::optional<Report> {
      const auto t = tournament_arg(players, edges, g.seed);
      const auto sol = mfas_exact(t);
      Report r("mfas");
      r.add("players", static_cast<std::uint64_t>(t.players()));
      r.add("upsets", static_cast<std::uint64_t>(sol.upsets));
      std::string ranking;
      for (auto x : sol.ranking.rank) {
        if (!ranking.empty()) ranking += ",";
        ranking += std::to_string(x);
      }
      r.add("ranking", ranking);
      if (verify) {
        const auto inst = mfas_to_instance(t);
        const auto best = optimal_map_one_exact(inst, g.budget);
        const Rational pairs(static_cast<long long>(inst.queries.entries.size()));
        const Rational via = pairs * (Rational(1) - best.ev);
        r.add("reduction_ev", best.ev);
        r.add("reduction_upsets", via);
        r.add("agree", via == Rational(static_cast<long long>(sol.upsets)));
      }
      return r;
    };
  });

  bool random = false;
  RandomSpec spec;
  std::string mechanism_text = "ALL";
  std::string enforce_text;
  std::string bids_text;
  std::string ctrs_text;
  auto* gen = app.add_subcommand("gen", "Emit a fixture (--fixture) or random instance");
  gen->add_flag("--random", random, "Generate a random instance from --seed");
  gen->add_option("--queries", spec.queries, "Random: number of queries");
  gen->add_option("--min-ads", spec.min_ads_per_query, "Random: min ads per query");
  gen->add_option("--max-ads", spec.max_ads_per_query, "Random: max ads per query");
  gen->add_option("--buckets", spec.buckets, "Random: number of buckets K");
  gen->add_option("--mechanism", mechanism_text, "Random: ONE or ALL")
      ->check(CLI::IsMember({"ONE", "ALL"}));
  gen->add_option("--enforce", enforce_text, "Random: E1 or E2")
      ->check(CLI::IsMember({"E1", "E2"}));
  gen->add_option("--bids", bids_text, "Random: bid grid, comma-separated");
  gen->add_option("--ctrs", ctrs_text, "Random: ctr grid, comma-separated");
  gen->add_option("--out", out_path, "Write the instance here instead of stdout");
  gen->callback([&] {
    action = [&]() -> std::optional<Report> {
      ProblemInstance inst;
      if (random) {
        if (!g.fixture.empty()) throw UsageError("--random excludes --fixture");
        spec.seed = g.seed;
        spec.mechanism = parse_mechanism(mechanism_text);
        if (enforce_text == "E1") spec.enforce = Property::kE1;
        if (enforce_text == "E2") spec.enforce = Property::kE2;
        if (!bids_text.empty()) spec.bids = bid_grid_arg(bids_text);
        if (!ctrs_text.empty()) spec.ctrs = grid_arg(ctrs_text);
        inst = random_instance(spec);
      } else {
        if (g.fixture.empty()) throw UsageError("gen needs --fixture or --random");
        inst = paper_fixture(g.fixture);
      }
      const auto text = emit_instance_text(inst);
      Report r("gen");
      r.add("queries", static_cast<std::uint64_t>(inst.queries.entries.size()));
      r.add("ads", static_cast<std::uint64_t>(inst.ads.size()));
      if (out_path.empty()) {
        out << text;
        return std::nullopt;
      }
      write_file(out_path, text);
      r.add("instance", out_path);
      return r;
    };
  });

  std::size_t batches = 1;
  std::uint64_t batch_queries = 10000;
  std::string log_path;
  auto* sim = app.add_subcommand("simulate", "Sampled batch recalibration loop");
  sim->add_option("--start", start_text, "Initial map f0 (default: E_C[p|z])");
  sim->add_option("--batches", batches, "Number of batches")->check(CLI::PositiveNumber);
  sim->add_option("--queries", batch_queries, "Queries per batch")
      ->check(CLI::PositiveNumber);
  sim->add_option("--log", log_path, "Write the last batch's click log here");
  sim->callback([&] {
    action = [&]() -> std::optional<Report> {
      const auto inst = load_valid(g);
      const auto f0 = start_text.empty() ? baseline_map(inst) : map_arg(inst, start_text);
      ClickLog last;
      const auto maps = run_loop(inst, f0, batches, batch_queries, g.seed,
                                 [&](std::size_t, const ClickLog& log) { last = log; });
      Report r("simulate");
      r.add("batches", static_cast<std::uint64_t>(batches));
      r.add("queries", batch_queries);
      for (std::size_t k = 0; k < maps.size(); ++k) {
        r.add("step." + std::to_string(k), maps[k].str());
      }
      const auto counts = bucket_counts(last, inst.buckets);
      for (std::size_t z = 1; z <= inst.buckets; ++z) {
        const std::string key = "last.bucket." + std::to_string(z);
        r.add(key + ".impressions", counts.impressions[z - 1]);
        r.add(key + ".clicks", counts.clicks[z - 1]);
      }
      if (!log_path.empty()) {
        std::ostringstream text;
        write_click_log(text, last);
        write_file(log_path, text.str());
        r.add("log", log_path);
      }
      return r;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (const auto report = action()) {
      out << report->render(g.format == "machine" ? Format::kMachine : Format::kHuman);
    }
    out.flush();
    return domain_exit;
  } catch (const DomainError& e) {
    err << "adcal: " << e.what() << '\n';
    return kExitDomain;
  } catch (const UsageError& e) {
    err << "adcal: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "adcal: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "adcal: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace adcal::cli
