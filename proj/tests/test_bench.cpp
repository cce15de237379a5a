#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "ocal/bench.hpp"
#include "ocal/error.hpp"
#include "ocal/folds.hpp"
#include "ocal/metrics.hpp"
#include "ocal/synthetic.hpp"
#include "support/helpers.hpp"

using namespace ocal;

namespace {

// DV(x) = 1 - exp(-|x|^2): zero at the origin, positive elsewhere.
OcsvmModel origin_model() {
  return OcsvmModel(Matrix::Zero(1, 2), {1.0}, 1.0, KernelParams(1.0), 0.5, 1);
}

BenchConfig small_config(std::vector<StrategyKind> kinds, std::uint64_t seed) {
  BenchConfig cfg;
  cfg.strategies = std::move(kinds);
  cfg.iterations = 4;
  cfg.hp = {0.1, 1.0 / 1024};
  cfg.seed = seed;
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("bacc arithmetic") {
  CHECK(bacc({200, 40, 200, 40}) == 1.0);
  CHECK(bacc({200, 0, 200, 40}) == 0.5);
  CHECK(bacc({100, 30, 200, 40}) == 0.625);
  CHECK_THROWS_AS(bacc({0, 0, 0, 4}), MetricError);
  CHECK_THROWS_AS(bacc({3, 0, 3, 0}), MetricError);
}

TEST_CASE("evaluate: DV = 0 is a target, labels swap roles") {
  Matrix x(4, 2);
  x << 0, 0, 3, 3, 0, 0, 5, 0;
  const Dataset ds("probe", x, {Label::target, Label::outlier, Label::outlier, Label::target});
  const OcsvmModel m = origin_model();
  CHECK(m.decision_value(ds.row(0)) == 0.0);
  const ConfusionCounts c = evaluate(m, ds);
  CHECK(c.n == 2);
  CHECK(c.p == 2);
  CHECK(c.tn == 1);  // id 0 at DV = 0
  CHECK(c.tp == 1);  // id 1
  const Dataset swapped("swapped", x, {Label::outlier, Label::target, Label::target, Label::outlier});
  const ConfusionCounts s = evaluate(m, swapped);
  CHECK(s.tn == 2 - c.tp);
  CHECK(s.tp == 2 - c.tn);
  const Dataset wide("wide", Matrix::Zero(2, 3), {Label::target, Label::outlier});
  CHECK_THROWS_AS(evaluate(m, wide), ContractError);
}

TEST_CASE("summary statistics match a two-pass computation") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.9, 0.05);
  for (std::size_t n : {2u, 10u, 1000u}) {
    std::vector<double> v(n);
    for (double& x : v) x = g(rng);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const Summary s = summarize(v);
    CHECK(std::abs(s.mean - mean) <= 1e-12);
    CHECK(std::abs(s.stddev - std::sqrt(ss / static_cast<double>(n - 1))) <= 1e-12);
  }
  const std::vector<double> same(10, 0.93);
  CHECK(summarize(same).stddev == 0.0);
  const std::vector<double> one{0.7};
  CHECK(summarize(one).stddev == 0.0);
}

TEST_CASE("grid search: single cell, determinism, argmax") {
  const Dataset ds = gen_two_cluster(3).data;
  const std::array<double, 1> nu{0.1}, gamma{0.5};
  const GridResult one = grid_search(ds, nu, gamma, 1);
  CHECK(one.best.nu == 0.1);
  CHECK(one.best.gamma == 0.5);
  CHECK(one.cells.size() == 1);

  const GridResult full = grid_search(ds, kDefaultNuGrid, kDefaultGammaGrid, 5);
  CHECK(full.cells.size() == 24);
  for (const GridCell& c : full.cells) {
    CHECK(std::isfinite(c.bacc));
    CHECK(full.best_bacc >= c.bacc);
  }
  // first maximiser in (gamma, nu) ascending order wins ties
  for (const GridCell& c : full.cells) {
    if (c.bacc == full.best_bacc) {
      CHECK(c.gamma == full.best.gamma);
      CHECK(c.nu == full.best.nu);
      break;
    }
  }
  const GridResult again = grid_search(ds, kDefaultNuGrid, kDefaultGammaGrid, 5);
  CHECK(again.best.nu == full.best.nu);
  CHECK(again.best.gamma == full.best.gamma);
  CHECK(again.best_bacc == full.best_bacc);
  CHECK_THROWS_AS(grid_search(ds, std::span<const double>{}, gamma, 1), ConfigError);
}

TEST_CASE("grid search: validation part needs both classes") {
  Matrix x = testing::gaussian(12, 2, 1);
  std::vector<Label> y(12, Label::target);
  y[0] = Label::outlier;  // round(0.7 * 1) = 1 keeps it in training
  const Dataset ds("lonely", x, y);
  const std::array<double, 1> nu{0.1}, gamma{0.5};
  CHECK_THROWS_AS(grid_search(ds, nu, gamma, 0), ConfigError);
}

TEST_CASE("benchmark: ten rotations per entry, schema independent of seed") {
  const Dataset ds = load_csv(testing::data_path("wine"));
  const FoldPlan plan = make_folds(ds, 10, 7);
  const BenchReport a = run_benchmark(ds, plan, small_config({StrategyKind::random}, 1));
  const BenchReport b = run_benchmark(ds, plan, small_config({StrategyKind::random}, 2));
  REQUIRE(a.entries.size() == 2);
  CHECK(a.entries[0].strategy == "initial");
  CHECK(a.entries[1].strategy == "random");
  CHECK(a.complete());
  for (const auto& e : a.entries) {
    CHECK(e.rotations.size() == 10);
    CHECK(e.final_bacc.count == 10);
  }
  for (const auto& r : a.find("random")->rotations) CHECK(r.bacc_curve.size() == 5);
  CHECK(a.find("initial")->rotations[0].bacc_curve.size() == 1);
  CHECK(a.find("initial")->rotations[3].bacc_curve[0] == a.find("random")->rotations[3].bacc_curve[0]);

  bool differs = false;
  for (int r = 0; r < 10; ++r) {
    differs |= a.find("random")->rotations[r].bacc_curve != b.find("random")->rotations[r].bacc_curve;
  }
  CHECK(differs);
  const auto ja = report_json(a, *a.find("random"));
  const auto jb = report_json(b, *b.find("random"));
  std::vector<std::string> ka, kb;
  for (auto it = ja.begin(); it != ja.end(); ++it) ka.push_back(it.key());
  for (auto it = jb.begin(); it != jb.end(); ++it) kb.push_back(it.key());
  CHECK(ka == kb);
  CHECK(ja["rotations"].size() == 10);
}

TEST_CASE("benchmark: parallel and serial schedules give identical reports") {
  const Dataset ds = load_csv(testing::data_path("wine"));
  const FoldPlan plan = make_folds(ds, 10, 3);
  BenchConfig cfg = small_config({StrategyKind::exploration, StrategyKind::lh, StrategyKind::random}, 4);
  const BenchReport serial = run_benchmark(ds, plan, cfg);
  cfg.threads = 4;
  const BenchReport parallel = run_benchmark(ds, plan, cfg);
  for (const auto& e : serial.entries) {
    CHECK(report_json(serial, e).dump() == report_json(parallel, *parallel.find(e.strategy)).dump());
  }
  std::ostringstream t1, t2;
  write_table_csv(t1, serial);
  write_table_csv(t2, parallel);
  CHECK(t1.str() == t2.str());
  CHECK(t1.str().rfind("dataset,strategy,mean_bacc,std_bacc,rotations\nwine,initial,", 0) == 0);
}

TEST_CASE("benchmark: roster seeds are independent of the roster") {
  CHECK(run_seed(7, StrategyKind::random, 0) != run_seed(7, StrategyKind::random, 1));
  CHECK(run_seed(7, StrategyKind::random, 0) != run_seed(7, StrategyKind::lh, 0));
  CHECK(run_seed(7, StrategyKind::random, 0) != run_seed(8, StrategyKind::random, 0));
  const Dataset ds = load_csv(testing::data_path("wine"));
  const FoldPlan plan = make_folds(ds, 10, 3);
  const BenchReport alone = run_benchmark(ds, plan, small_config({StrategyKind::random}, 4));
  const BenchReport mixed =
      run_benchmark(ds, plan, small_config({StrategyKind::exploration, StrategyKind::random}, 4));
  CHECK(report_json(alone, *alone.find("random")).dump() == report_json(mixed, *mixed.find("random")).dump());
}

TEST_CASE("benchmark: config errors and failed runs") {
  const Dataset ds = load_csv(testing::data_path("wine"));
  const FoldPlan plan = make_folds(ds, 10, 3);
  BenchConfig cfg = small_config({}, 1);
  cfg.include_initial = false;
  CHECK_THROWS_AS(run_benchmark(ds, plan, cfg), ConfigError);
  cfg = small_config({StrategyKind::lh}, 1);
  cfg.lh_ensemble_size = 1;
  const BenchReport r = run_benchmark(ds, plan, cfg);
  CHECK_FALSE(r.complete());
  CHECK(r.find("initial")->complete());
  CHECK(r.warnings.size() == 10);
  CHECK(r.find("lh")->final_bacc.count == 0);
}

TEST_CASE("worker count honours OC_ACTIVE_THREADS") {
  ::setenv("OC_ACTIVE_THREADS", "2", 1);
  CHECK(worker_count(8) == 2);
  CHECK(worker_count(1) == 1);
  ::setenv("OC_ACTIVE_THREADS", "junk", 1);
  CHECK(worker_count(3) == 3);
  ::unsetenv("OC_ACTIVE_THREADS");
  CHECK(worker_count(5) == 5);
  CHECK(worker_count(0) >= 1);
}

}  // TEST_SUITE
