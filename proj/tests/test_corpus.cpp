#include <doctest.h>

#include <chrono>

#include "drugsent/corpus.hpp"
#include "drugsent/log.hpp"
#include "test_support.hpp"

using namespace drugsent;
using drugsent::testing::kHeader;
using drugsent::testing::tsv_row;

TEST_CASE("bucket_rating boundaries") {
  CHECK(bucket_rating(2) == Sentiment::Negative);
  CHECK(bucket_rating(9) == Sentiment::Positive);
  CHECK(bucket_rating(5) == Sentiment::Neutral);
  CHECK(bucket_rating(7) == Sentiment::Positive);
  CHECK(bucket_rating(1) == Sentiment::Negative);
  CHECK(bucket_rating(4) == Sentiment::Negative);
  CHECK(bucket_rating(6) == Sentiment::Neutral);
  CHECK(bucket_rating(10) == Sentiment::Positive);
  CHECK_THROWS_AS(bucket_rating(0), std::out_of_range);
  CHECK_THROWS_AS(bucket_rating(11), std::out_of_range);
}

TEST_CASE("bucket_rating is monotone") {
  for (int a = 1; a <= 10; ++a) {
    for (int b = a; b <= 10; ++b) {
      CHECK(class_index(bucket_rating(a)) <= class_index(bucket_rating(b)));
    }
  }
}

TEST_CASE("parse_tsv reads the drugsCom layout") {
  std::string tsv = kHeader;
  tsv += tsv_row(206461, "Valsartan", "Left Ventricular Dysfunction",
                 "It has no side effect, I take it in combination", "9.0", "May 20, 2012", 27);
  tsv += tsv_row(95260, "Guanfacine", "ADHD", "My son is halfway through his fourth week", "8.0",
                 "April 27, 2010", 192);
  const auto result = parse_tsv(tsv, "inline");
  REQUIRE(result.records.size() == 2);
  CHECK(result.skipped_rows == 0);
  const auto& r = result.records[0];
  CHECK(r.row_id == 206461);
  CHECK(r.drug_name == "Valsartan");
  CHECK(r.condition == "Left Ventricular Dysfunction");
  CHECK(r.review_text == "It has no side effect, I take it in combination");
  CHECK(r.rating == 9);
  CHECK(r.review_date == std::chrono::year_month_day{std::chrono::year{2012}, std::chrono::May,
                                                     std::chrono::day{20}});
  CHECK(r.useful_count == 27);
}

TEST_CASE("quoted reviews may contain tabs, newlines and doubled quotes") {
  std::string tsv = kHeader;
  tsv += "1\tDrug\tPain\t\"line one\r\nline \"\"two\"\"\tstill\"\t10.0\t2015-01-02\t0\n";
  const auto result = parse_tsv(tsv, "inline");
  REQUIRE(result.records.size() == 1);
  CHECK(result.records[0].review_text == "line one\r\nline \"two\"\tstill");
  CHECK(result.records[0].rating == 10);
}

TEST_CASE("header-only file yields no records") {
  CHECK(parse_tsv(kHeader, "inline").records.empty());
  CHECK(parse_tsv("", "inline").records.empty());
}

TEST_CASE("malformed rows are skipped and counted") {
  log::set_quiet(true);
  std::string tsv = kHeader;
  for (int i = 0; i < 150; ++i) tsv += tsv_row(i, "D", "Pain", "fine review", "8.0");
  tsv += tsv_row(999, "D", "Pain", "rating too high", "11");
  const auto before = log::warning_count();
  const auto result = parse_tsv(tsv, "inline");
  CHECK(result.records.size() == 150);
  CHECK(result.skipped_rows == 1);
  CHECK(log::warning_count() > before);
}

TEST_CASE("non-integral and non-numeric ratings are skip errors") {
  log::set_quiet(true);
  std::string tsv = kHeader;
  for (int i = 0; i < 300; ++i) tsv += tsv_row(i, "D", "Pain", "review", "3.0");
  tsv += tsv_row(1000, "D", "Pain", "half star", "9.5");
  tsv += tsv_row(1001, "D", "Pain", "words", "nine");
  tsv += tsv_row(1002, "D", "Pain", "", "9.0");      // empty review
  const auto result = parse_tsv(tsv, "inline");
  CHECK(result.records.size() == 300);
  CHECK(result.skipped_rows == 3);
}

TEST_CASE("too many malformed rows is fatal") {
  log::set_quiet(true);
  std::string tsv = kHeader;
  for (int i = 0; i < 20; ++i) tsv += tsv_row(i, "D", "Pain", "review", "8.0");
  tsv += "this is not a drugsCom row\n";
  CHECK_THROWS_AS(parse_tsv(tsv, "inline"), std::runtime_error);
  LoadOptions lenient;
  lenient.max_skip_fraction = 0.5;
  CHECK(parse_tsv(tsv, "inline", lenient).records.size() == 20);
}

TEST_CASE("missing file is fatal") {
  CHECK_THROWS_AS(load_tsv("/nonexistent/drugsComTrain_raw.tsv", SplitTag::Train),
                  std::runtime_error);
}

TEST_CASE("load_tsv is deterministic") {
  testing::TempDir dir("corpus");
  const auto data = testing::synthetic_tsv(5, {{"Pain", 40}, {"Acne", 30}});
  testing::write_file(dir.path() / "train.tsv", data.tsv);
  const auto a = load_tsv(dir.path() / "train.tsv", SplitTag::Train);
  const auto b = load_tsv(dir.path() / "train.tsv", SplitTag::Train);
  CHECK(a.records.size() == 70);
  CHECK(a.records == b.records);
}

TEST_CASE("filter_condition keeps exact matches in file order") {
  std::vector<ReviewRecord> records;
  auto add = [&](std::int64_t id, std::string condition, int rating) {
    ReviewRecord r;
    r.row_id = id;
    r.condition = std::move(condition);
    r.review_text = "text " + std::to_string(id);
    r.rating = rating;
    records.push_back(r);
  };
  add(5, "Pain", 2);
  add(3, "pain", 9);
  add(9, "Pain", 9);
  add(1, "</span> users found this comment helpful.", 5);
  add(4, "Pain", 5);

  const auto pain = filter_condition(records, "Pain", SplitTag::Test);
  CHECK(pain.condition_name == "Pain");
  CHECK(pain.split == SplitTag::Test);
  REQUIRE(pain.size() == 3);
  CHECK(pain.documents[0].row_id == 5);
  CHECK(pain.documents[0].label == Sentiment::Negative);
  CHECK(pain.documents[1].row_id == 9);
  CHECK(pain.documents[1].label == Sentiment::Positive);
  CHECK(pain.documents[2].label == Sentiment::Neutral);

  CHECK(filter_condition(records, "NoSuchCondition", SplitTag::Train).empty());
  CHECK_THROWS_AS(filter_condition(records, "", SplitTag::Train), std::invalid_argument);

  // Slices over every distinct condition partition the records.
  std::size_t total = 0;
  for (const auto& [condition, count] : condition_counts(records)) {
    const auto slice = filter_condition(records, condition, SplitTag::Train);
    CHECK(slice.size() == count);
    total += slice.size();
  }
  CHECK(total == records.size());
}

TEST_CASE("class_distribution") {
  LabeledCorpus one{"x", SplitTag::Train, {{1, "a", Sentiment::Positive}}};
  const auto d1 = class_distribution(one);
  CHECK(d1[2] == 1.0);
  CHECK(d1[0] == 0.0);
  CHECK(d1[1] == 0.0);

  LabeledCorpus balanced{"x", SplitTag::Train, {}};
  for (int i = 0; i < 30; ++i) {
    balanced.documents.push_back({i, "t", sentiment_from_index(static_cast<std::size_t>(i % 3))});
  }
  const auto d2 = class_distribution(balanced);
  for (double p : d2) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(d2[0] + d2[1] + d2[2] == doctest::Approx(1.0).epsilon(1e-9));

  LabeledCorpus empty{"x", SplitTag::Train, {}};
  CHECK_THROWS_AS(class_distribution(empty), std::invalid_argument);
  CHECK_THROWS_AS(class_distribution(std::span<const ReviewRecord>{}), std::invalid_argument);
}
