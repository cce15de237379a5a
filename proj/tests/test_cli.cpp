#include <doctest.h>

#include <sstream>

#include "cli/commands.hpp"
#include "ocal/synthetic.hpp"
#include "support/helpers.hpp"

using namespace ocal;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string wine() { return testing::data_path("wine").string(); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("check prints the dataset summary") {
  const Outcome o = invoke({"check", "--dataset", testing::data_path("breastw").string()});
  CHECK(o.code == cli::kOk);
  CHECK(o.out == "breastw: n=683 d=9 targets=444 outliers=239\n");
  CHECK(invoke({"check", "--dataset", "/nonexistent.csv"}).code == cli::kRuntimeFailure);
}

TEST_CASE("usage errors exit with 2") {
  const auto dir = testing::scratch_dir("usage").string();
  CHECK(invoke({}).code == cli::kUsageError);
  CHECK(invoke({"frobnicate"}).code == cli::kUsageError);
  CHECK(invoke({"run", "--dataset", wine(), "--strategy", "bogus", "--out", dir}).code == cli::kUsageError);
  CHECK(invoke({"bench", "--dataset", wine(), "--strategy", "exploration,nope", "--out", dir}).code ==
        cli::kUsageError);
  CHECK(invoke({"grid", "--dataset", wine(), "--nu-grid", "", "--out", dir}).code == cli::kUsageError);
  CHECK(invoke({"grid", "--dataset", wine(), "--gamma-grid", ",", "--out", dir}).code == cli::kUsageError);
  CHECK(invoke({"grid", "--dataset", wine(), "--nu", "0.1", "--out", dir}).code == cli::kUsageError);
  CHECK(invoke({"run", "--dataset", wine(), "--strategy", "lh", "--rotation", "10", "--out", dir}).code ==
        cli::kUsageError);
  CHECK(invoke({"run", "--dataset", wine(), "--strategy", "lh", "--oracle", "telepathy"}).code ==
        cli::kUsageError);
  CHECK(invoke({"--help"}).code == cli::kOk);
}

TEST_CASE("grid: default grids on the artificial dataset, explicit pair bypasses search") {
  const auto dir = testing::scratch_dir("grid");
  save_csv(dir / "two_cluster.csv", gen_two_cluster(0).data);
  const Outcome o = invoke({"grid", "--dataset", (dir / "two_cluster.csv").string(), "--out", dir.string()});
  REQUIRE(o.code == cli::kOk);
  const auto j = nlohmann::json::parse(testing::slurp(dir / "two_cluster_grid.json"));
  CHECK(j["cells"].size() == 24);
  for (const auto& c : j["cells"]) CHECK(std::isfinite(c["bacc"].get<double>()));

  const Outcome fixed = invoke({"grid", "--dataset", (dir / "two_cluster.csv").string(), "--nu", "0.1",
                             "--gamma", "0.5", "--out", dir.string()});
  CHECK(fixed.code == cli::kOk);
  CHECK(fixed.out == "nu=0.1 gamma=0.5\n");
  const auto jf = nlohmann::json::parse(testing::slurp(dir / "two_cluster_grid.json"));
  CHECK(jf["searched"] == false);
  CHECK_FALSE(jf.contains("cells"));
}

TEST_CASE("bench: all strategies plus initial, ten rotations each") {
  const auto dir = testing::scratch_dir("bench");
  const Outcome o = invoke({"bench", "--dataset", wine(), "--strategies", "all", "--iterations", "2", "--nu",
                         "0.1", "--gamma", "0.001", "--seed", "7", "--out", dir.string()});
  REQUIRE(o.code == cli::kOk);
  for (const char* s : {"initial", "random", "lh", "expected-margin", "entropy", "outlier", "similarity",
                        "exploration"}) {
    CAPTURE(s);
    const fs::path p = dir / (std::string("wine_") + s + ".json");
    REQUIRE(fs::exists(p));
    const auto j = nlohmann::json::parse(testing::slurp(p));
    CHECK(j["rotations"].size() == 10);
    CHECK(j["strategy"] == s);
    CHECK(j["iterations"] == 2);
  }
  CHECK(fs::exists(dir / "wine_table.csv"));
}

TEST_CASE("bench: table budget defaults") {
  const auto dir = testing::scratch_dir("budget");
  const Outcome o = invoke({"bench", "--dataset", wine(), "--strategy", "outlier", "--nu", "0.1", "--gamma",
                         "0.001", "--out", dir.string()});
  REQUIRE(o.code == cli::kOk);
  const auto j = nlohmann::json::parse(testing::slurp(dir / "wine_outlier.json"));
  CHECK(j["iterations"] == 20);
  CHECK(j["batch"] == 1);
  CHECK(j["rotations"][0]["bacc_curve"].size() == 21);
}

TEST_CASE("run: interactive oracle reads labels from the input stream") {
  const auto dir = testing::scratch_dir("interactive");
  const Outcome o = invoke({"run", "--dataset", wine(), "--strategy", "exploration", "--iterations", "3",
                         "--nu", "0.1", "--gamma", "0.001", "--oracle", "interactive", "--out", dir.string()},
                        "t\nx\no\nt\n");
  CHECK(o.code == cli::kOk);
  CHECK(o.out.find("label [t/o]? ") != std::string::npos);
  const auto j = nlohmann::json::parse(testing::slurp(dir / "wine_exploration_r0.json"));
  REQUIRE(j["queried"].size() == 3);
  CHECK(j["queried"][0]["label"] == "target");
  CHECK(j["queried"][1]["label"] == "outlier");
  CHECK(j["queried"][2]["label"] == "target");

  const Outcome eof = invoke({"run", "--dataset", wine(), "--strategy", "exploration", "--iterations", "3",
                           "--nu", "0.1", "--gamma", "0.001", "--oracle", "interactive", "--out",
                           dir.string()},
                          "t\n");
  CHECK(eof.code == cli::kRuntimeFailure);
  const auto je = nlohmann::json::parse(testing::slurp(dir / "wine_exploration_r0.json"));
  CHECK(je["complete"] == false);
  CHECK(je["queried"].size() == 1);
}

TEST_CASE("run: stored target model reloads") {
  const auto dir = testing::scratch_dir("model");
  REQUIRE(invoke({"run", "--dataset", wine(), "--strategy", "similarity", "--rotation", "4", "--iterations", "3",
               "--nu", "0.1", "--gamma", "0.001", "--out", dir.string()})
              .code == cli::kOk);
  const auto j = nlohmann::json::parse(testing::slurp(dir / "wine_similarity_r4.json"));
  const OcsvmModel m = OcsvmModel::from_json(j["target_model"]);
  CHECK(m.nu() == 0.1);
  CHECK(j["bacc_curve"].size() == 4);
}

TEST_CASE("demo: three default snapshots on a 200 x 200 grid") {
  const auto dir = testing::scratch_dir("demo");
  const Outcome o = invoke({"demo", "--seed", "0", "--out", dir.string()});
  REQUIRE(o.code == cli::kOk);
  for (int it : {1, 12, 27}) {
    const fs::path p = dir / ("two_cluster_iter" + std::to_string(it) + ".json");
    REQUIRE(fs::exists(p));
    const auto j = nlohmann::json::parse(testing::slurp(p));
    CHECK(j["iteration"] == it);
    CHECK(j["xs"].size() == 200);
    CHECK(j["ys"].size() == 200);
    REQUIRE(j["dvt"].size() == 200);
    CHECK(j["dvt"][0].size() == 200);
    REQUIRE(j["dvo"].size() == 200);
    CHECK(j["dvo"][199].size() == 200);
    CHECK(j["queried_ids"].size() == static_cast<std::size_t>(it));
  }
  const auto s = nlohmann::json::parse(testing::slurp(dir / "two_cluster_demo.json"));
  CHECK(s["snapshots"].size() == 3);
  CHECK(s["initial_ids"].size() == 3);
}

TEST_CASE("boundary grid covers the data with a 10% margin") {
  const TwoClusterData demo = gen_two_cluster(0);
  const RunState state = init_run(demo_split(demo), demo.data, kDemoHyperparams);
  const cli::BoundaryGrid g = cli::boundary_grid(demo.data, state, 0, {}, 11);
  const double lo = demo.data.features().col(0).minCoeff();
  const double hi = demo.data.features().col(0).maxCoeff();
  CHECK(g.xs.front() == doctest::Approx(lo - 0.1 * (hi - lo)));
  CHECK(g.xs.back() == doctest::Approx(hi + 0.1 * (hi - lo)));
  CHECK(g.dvt.size() == 11);
  CHECK_FALSE(g.has_outlier_model);
  for (const auto& row : g.dvo) {
    for (double v : row) CHECK(v == 1.0);
  }
}

TEST_CASE("reruns produce byte-identical JSON") {
  const auto a = testing::scratch_dir("det_a");
  const auto b = testing::scratch_dir("det_b");
  for (const auto& dir : {a, b}) {
    const std::string d = dir.string();
    REQUIRE(invoke({"grid", "--dataset", wine(), "--seed", "3", "--out", d}).code == cli::kOk);
    REQUIRE(invoke({"run", "--dataset", wine(), "--strategy", "lh", "--iterations", "4", "--seed", "3", "--nu",
                 "0.1", "--gamma", "0.001", "--out", d})
                .code == cli::kOk);
    REQUIRE(invoke({"bench", "--dataset", wine(), "--strategies", "random,exploration,entropy", "--iterations",
                 "3", "--seed", "3", "--nu", "0.1", "--gamma", "0.001", "--threads", "3", "--out", d})
                .code == cli::kOk);
    REQUIRE(invoke({"demo", "--seed", "3", "--snapshots", "2,5", "--resolution", "30", "--out", d}).code ==
            cli::kOk);
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    CAPTURE(entry.path().filename().string());
    REQUIRE(fs::exists(b / entry.path().filename()));
    CHECK(testing::slurp(entry.path()) == testing::slurp(b / entry.path().filename()));
    ++compared;
  }
  CHECK(compared == 9);
}

}  // TEST_SUITE
