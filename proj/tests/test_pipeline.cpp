#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "drugsent/log.hpp"
#include "drugsent/pipeline.hpp"
#include "test_support.hpp"

using namespace drugsent;
using namespace drugsent::testing;
namespace fs = std::filesystem;

namespace {

struct Fixture {
  TempDir dir{"pipeline"};
  fs::path train = dir.path() / "train.tsv";
  fs::path test = dir.path() / "test.tsv";

  Fixture() {
    write_file(train, synthetic_tsv(1, {{"Birth Control", 240}, {"Depression", 60},
                                        {"Acne", 30}}).tsv);
    write_file(test, synthetic_tsv(2, {{"Birth Control", 80}, {"Depression", 20}}, 90000).tsv);
  }

  RunConfig config(const std::string& algo, const std::string& out) const {
    RunConfig c;
    c.train_file = train;
    c.test_file = test;
    c.condition = "Birth Control";
    c.algorithm = parse_algorithm(algo);
    c.k = 3;
    c.seed = 5;
    c.out_dir = dir.path() / out;
    c.threads = 2;
    return c;
  }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + DRUGSENT_CLI + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t partial_dirs(const fs::path& root) {
  std::size_t n = 0;
  if (!fs::exists(root)) return 0;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.path().filename().string().find(".partial-") != std::string::npos) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("stats counts records and slices") {
  Fixture f;
  auto c = f.config("logreg", "stats");
  std::ostringstream out;
  const auto doc = cmd_stats(c, out);
  CHECK(doc["files"]["train"]["records"] == 330);
  CHECK(doc["files"]["test"]["records"] == 100);
  CHECK(doc["distinct_conditions"] == 3);
  CHECK(doc["top_conditions"][0]["condition"] == "Birth Control");
  CHECK(doc["top_conditions"][0]["records"] == 320);
  CHECK(doc["condition"]["train"] == 240);
  CHECK(doc["condition"]["test"] == 80);
  CHECK(doc["condition"]["vocabulary_size"].get<int>() > 10);
  double mix = 0.0;
  for (const auto& [k, v] : doc["class_distribution"].items()) mix += v.get<double>();
  CHECK(mix == doctest::Approx(1.0));
  CHECK(nlohmann::json::parse(read_file(c.out_dir / "stats.json")) == doc);

  c.condition = "No Such Condition";
  const auto empty = cmd_stats(c, out);
  CHECK(empty["condition"]["train"] == 0);
  CHECK(empty["condition"]["vocabulary_size"] == 0);
}

TEST_CASE("train writes a deterministic result directory") {
  Fixture f;
  log::set_quiet(true);
  std::ostringstream out;
  const auto a = cmd_train(f.config("logreg", "a"), out);
  const auto b = cmd_train(f.config("logreg", "b"), out);
  CHECK(a.dir == f.dir.path() / "a" / "Birth_Control" / "tfidf" / "logreg");
  for (const char* name : {"model.json", "metrics.json", "curves.csv", "roc_positive.svg"}) {
    REQUIRE(fs::exists(a.dir / name));
    CHECK(read_file(a.dir / name) == read_file(b.dir / name));
  }
  CHECK(a.report.n_train == 240);
  CHECK(a.report.n_test == 80);
  CHECK(a.report.cv.fold_accuracies.size() == 3);
  // The synthetic reviews carry a strong class signal.
  CHECK(a.report.test_accuracy > 0.7);
  CHECK(partial_dirs(f.dir.path()) == 0);

  auto count = f.config("rf", "c");
  count.encoding = Encoding::Count;
  count.params = {{"num_trees", 10}};
  const auto rf = cmd_train(count, out);
  CHECK(rf.dir == f.dir.path() / "c" / "Birth_Control" / "count" / "rf");
  log::set_quiet(false);
}

TEST_CASE("a one-cell grid produces the same model as train") {
  Fixture f;
  log::set_quiet(true);
  std::ostringstream out;
  auto t = f.config("svm", "train");
  t.params = {{"C", 0.5}};
  const auto trained = cmd_train(t, out);
  auto g = f.config("svm", "grid");
  g.grid = {{"C", {0.5}}};
  const auto searched = cmd_gridsearch(g, out);
  CHECK(read_file(trained.dir / "model.json") == read_file(searched.dir / "model.json"));
  CHECK(read_file(trained.dir / "metrics.json") == read_file(searched.dir / "metrics.json"));
  const auto csv = read_file(searched.dir / "grid.csv");
  CHECK(csv.rfind("rank,cell,mean_accuracy,fold0,fold1,fold2,params,error\n", 0) == 0);

  auto g2 = f.config("svm", "grid2");
  g2.grid = {{"C", {0.001, 1.0}}};
  const auto two = cmd_gridsearch(g2, out);
  CHECK(std::get<SvmParams>(two.report.spec).C == 1.0);
  log::set_quiet(false);
}

TEST_CASE("failed runs leave earlier results untouched") {
  Fixture f;
  log::set_quiet(true);
  std::ostringstream out;
  auto good = f.config("mlp", "out");
  good.params = {{"hidden_layers", 1}, {"hidden_neurons", 4}, {"epochs", 2},
                 {"activation", "linear"}, {"optimizer", "sgd"}};
  const auto first = cmd_train(good, out);
  const auto before = read_file(first.dir / "model.json");
  auto bad = good;
  bad.params["learning_rate"] = 1e300;
  CHECK_THROWS_AS(cmd_train(bad, out), std::runtime_error);
  CHECK(read_file(first.dir / "model.json") == before);
  CHECK(partial_dirs(f.dir.path()) == 0);

  auto missing = good;
  missing.condition = "Nothing";
  CHECK_THROWS_AS(cmd_train(missing, out), std::runtime_error);
  log::set_quiet(false);
}

TEST_CASE("config parsing") {
  const auto c = RunConfig::from_json({{"train_file", "a.tsv"},
                                       {"test_file", "b.tsv"},
                                       {"condition", "Acne"},
                                       {"encoding", "count"},
                                       {"algorithm", "forest"},
                                       {"params", {{"max_depth", 3}}},
                                       {"k", 4},
                                       {"seed", 9},
                                       {"out", "res"}});
  CHECK(c.encoding == Encoding::Count);
  CHECK(c.algorithm == Algorithm::RandomForest);
  const auto spec = std::get<ForestParams>(c.model_spec());
  CHECK(spec.max_depth == 3);
  CHECK(spec.seed == 9);
  CHECK(c.result_dir() == fs::path("res") / "Acne" / "count" / "rf");
  CHECK_NOTHROW(c.validate_for("train"));

  CHECK_THROWS_AS(RunConfig::from_json({{"tarin_file", "x"}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"k", "ten"}}), ConfigError);
  CHECK_THROWS_AS(RunConfig{}.validate_for("train"), ConfigError);
  auto no_algo = c;
  no_algo.algorithm.reset();
  CHECK_THROWS_AS(no_algo.validate_for("train"), ConfigError);
  auto bad_param = c;
  bad_param.params = {{"max_depth", "deep"}};
  CHECK_THROWS_AS(bad_param.model_spec(), ConfigError);

  CHECK(path_component("Birth Control") == "Birth_Control");
  CHECK(path_component("../x") == ".._x");
  CHECK(path_component("") == "_");
}

TEST_CASE("command-line exit codes") {
  Fixture f;
  const std::string files =
      "--train-file \"" + f.train.string() + "\" --test-file \"" + f.test.string() + "\"";
  const std::string out = " --out \"" + (f.dir.path() / "cli").string() + "\" --quiet";
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("bogus") == 2);
  CHECK(run_cli("stats " + files + out) == 0);
  CHECK(run_cli("stats " + files + " --condition \"Nothing here\"" + out) == 0);
  CHECK(run_cli("train " + files + " --condition \"Birth Control\" --algo knn" + out) == 2);
  CHECK(run_cli("train " + files + " --condition \"Birth Control\"" + out) == 2);
  CHECK(run_cli("train --train-file /nonexistent.tsv --test-file /nonexistent.tsv "
                "--condition Acne --algo svm" + out) == 1);
  CHECK(run_cli("train " + files + " --condition \"Birth Control\" --algo svm --encoding count" +
                out) == 0);
  CHECK(fs::exists(f.dir.path() / "cli" / "Birth_Control" / "count" / "svm" / "metrics.json"));

  write_file(f.dir.path() / "run.json",
             nlohmann::json{{"train_file", f.train.string()},
                            {"test_file", f.test.string()},
                            {"condition", "Birth Control"},
                            {"algorithm", "logreg"},
                            {"grid", {{"C", {0.1, 1}}}},
                            {"k", 3}}
                 .dump());
  CHECK(run_cli("gridsearch --config \"" + (f.dir.path() / "run.json").string() + "\"" + out) ==
        0);
  CHECK(fs::exists(f.dir.path() / "cli" / "Birth_Control" / "tfidf" / "logreg" / "grid.csv"));
  write_file(f.dir.path() / "broken.json", "{\"k\": 3,");
  CHECK(run_cli("train --config \"" + (f.dir.path() / "broken.json").string() + "\"") == 2);
}
