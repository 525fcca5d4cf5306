#include <doctest.h>

#include <filesystem>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "drugsent/report.hpp"
#include "test_support.hpp"

using namespace drugsent;
using namespace drugsent::testing;

namespace {

EvalReport sample_report(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<Sentiment> truth(n);
  ScoreMatrix scores{n, std::vector<double>(n * kNumClasses)};
  for (std::size_t i = 0; i < n; ++i) {
    truth[i] = sentiment_from_index(i % 3);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      scores.values[i * kNumClasses + c] =
          0.5 * rng.uniform() + (c == class_index(truth[i]) ? 0.4 : 0.0);
    }
  }
  EvalReport r;
  r.spec = LogRegParams{};
  r.condition = "Birth Control";
  r.n_train = 100;
  r.n_features = 50;
  r.cv = {0.7, {0.6, 0.8}};
  evaluate_test_set(r, truth, scores);
  return r;
}

}  // namespace

TEST_CASE("evaluate_test_set fills every metric") {
  const auto r = sample_report(1, 90);
  CHECK(r.n_test == 90);
  CHECK(r.test_accuracy > 0.5);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    REQUIRE(r.roc[c].has_value());
    REQUIRE(r.pr[c].has_value());
    CHECK(r.roc[c]->area > 0.5);
  }
  CHECK(r.macro_f1 == doctest::Approx((r.f1[0] + r.f1[1] + r.f1[2]) / 3.0));
  REQUIRE(r.macro_roc_auc.has_value());
  CHECK(*r.macro_roc_auc ==
        doctest::Approx((r.roc[0]->area + r.roc[1]->area + r.roc[2]->area) / 3.0));
}

TEST_CASE("classes missing from the test set have no curves") {
  std::vector<Sentiment> truth = {Sentiment::Negative, Sentiment::Positive, Sentiment::Positive};
  ScoreMatrix scores{3, {0.9, 0.1, 0.1, 0.2, 0.1, 0.8, 0.3, 0.3, 0.6}};
  EvalReport r;
  r.spec = SvmParams{};
  evaluate_test_set(r, truth, scores);
  CHECK_FALSE(r.roc[1].has_value());
  CHECK_FALSE(r.pr[1].has_value());
  CHECK(*r.macro_roc_auc == doctest::Approx(1.0));
  CHECK(r.test_accuracy == 1.0);
}

TEST_CASE("report files are written and byte-identical across runs") {
  const auto r = sample_report(2, 60);
  TempDir dir("report");
  write_report(r, dir.path() / "a");
  write_report(r, dir.path() / "b");
  for (const char* name : {"metrics.json", "curves.csv", "roc_negative.svg", "roc_neutral.svg",
                           "roc_positive.svg", "pr_negative.svg", "pr_neutral.svg",
                           "pr_positive.svg"}) {
    REQUIRE(std::filesystem::exists(dir.path() / "a" / name));
    CHECK(read_file(dir.path() / "a" / name) == read_file(dir.path() / "b" / name));
  }
  const auto j = nlohmann::json::parse(read_file(dir.path() / "a" / "metrics.json"));
  CHECK(j["schema_version"] == kMetricsSchemaVersion);
  CHECK(j["test"]["accuracy"].get<double>() == r.test_accuracy);
  CHECK(j["data"]["condition"] == "Birth Control");
  CHECK(j == report_to_json(r));

  const auto csv = read_file(dir.path() / "a" / "curves.csv");
  CHECK(csv.rfind("class,curve,x,y,threshold\n", 0) == 0);
  CHECK(csv.find(",inf\n") != std::string::npos);
  const auto svg = read_file(dir.path() / "a" / "roc_positive.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("ROC - positive (AUC ") != std::string::npos);
}

TEST_CASE("write_report errors") {
  auto r = sample_report(3, 30);
  TempDir dir("report-err");
  write_file(dir.path() / "file", "x");
  CHECK_THROWS_AS(write_report(r, dir.path() / "file" / "sub"), std::runtime_error);
  auto empty_curve = r;
  empty_curve.roc[0]->points.clear();
  CHECK_THROWS_AS(write_report(empty_curve, dir.path() / "x"), std::runtime_error);
  auto no_curves = r;
  for (auto& c : no_curves.roc) c.reset();
  for (auto& c : no_curves.pr) c.reset();
  CHECK_THROWS_AS(write_report(no_curves, dir.path() / "y"), std::runtime_error);
}
