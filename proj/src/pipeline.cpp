#include "drugsent/pipeline.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include "drugsent/corpus.hpp"
#include "drugsent/log.hpp"
#include "drugsent/model_io.hpp"
#include "drugsent/models.hpp"
#include "drugsent/textprep.hpp"
#include "drugsent/types.hpp"

namespace drugsent {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

template <typename T>
T config_value(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has invalid value " +
                      j.at(key).dump());
  }
}

Stopwords stopwords_for(const RunConfig& config) {
  if (config.stopwords_file) return Stopwords::from_file(*config.stopwords_file);
  return Stopwords::english();
}

std::vector<CleanDocument> clean_corpus(const LabeledCorpus& corpus, const Stopwords& sw) {
  std::vector<CleanDocument> docs;
  docs.reserve(corpus.size());
  for (const auto& d : corpus.documents) docs.push_back(prepare_review(d.raw_text, sw));
  return docs;
}

struct PreparedData {
  Vocabulary vocab;
  DocTermMatrix X_train;
  DocTermMatrix X_test;
  std::vector<Sentiment> y_train;
  std::vector<Sentiment> y_test;
};

PreparedData prepare(const RunConfig& config, std::ostream& out) {
  const auto sw = stopwords_for(config);
  const auto train = load_tsv(config.train_file, SplitTag::Train);
  const auto test = load_tsv(config.test_file, SplitTag::Test);
  const auto train_slice = filter_condition(train.records, config.condition, SplitTag::Train);
  const auto test_slice = filter_condition(test.records, config.condition, SplitTag::Test);
  if (train_slice.empty()) {
    throw std::runtime_error("no training reviews for condition '" + config.condition + "'");
  }
  if (test_slice.empty()) {
    throw std::runtime_error("no test reviews for condition '" + config.condition + "'");
  }
  const auto train_docs = clean_corpus(train_slice, sw);
  const auto test_docs = clean_corpus(test_slice, sw);
  PreparedData data{Vocabulary::fit(train_docs), {}, {}, train_slice.labels(), test_slice.labels()};
  data.X_train = transform(train_docs, data.vocab, config.encoding);
  data.X_test = transform(test_docs, data.vocab, config.encoding);
  out << config.condition << ": " << train_slice.size() << " train / " << test_slice.size()
      << " test reviews, " << data.vocab.size() << " terms, encoding "
      << encoding_name(config.encoding) << '\n';
  return data;
}

// Writes into a hidden sibling directory and renames it over the final one,
// so readers never see a half-written result.
class StagedDirectory {
 public:
  explicit StagedDirectory(fs::path final_dir) : final_(std::move(final_dir)) {
    staging_ = final_.parent_path() /
               ("." + final_.filename().string() + ".partial-" + std::to_string(::getpid()));
    fs::remove_all(staging_);
    fs::create_directories(staging_);
  }
  StagedDirectory(const StagedDirectory&) = delete;
  StagedDirectory& operator=(const StagedDirectory&) = delete;
  ~StagedDirectory() {
    if (!committed_) {
      std::error_code ec;
      fs::remove_all(staging_, ec);
    }
  }

  const fs::path& path() const { return staging_; }

  void commit() {
    fs::remove_all(final_);
    fs::rename(staging_, final_);
    committed_ = true;
  }

 private:
  fs::path final_;
  fs::path staging_;
  bool committed_ = false;
};

RunOutputs fit_and_report(const RunConfig& config, const PreparedData& data,
                          const ModelSpec& spec, const CvResult& cv, std::ostream& out,
                          const GridResult* grid) {
  out << "training " << algorithm_name(algorithm_of(spec)) << " (" << describe(spec)
      << ") on the full training slice\n";
  const auto model = train_model(spec, data.X_train, data.y_train);
  const auto scores = predict_scores(model, data.X_test);

  EvalReport report;
  report.spec = spec;
  report.condition = config.condition;
  report.encoding = config.encoding;
  report.n_train = data.X_train.rows();
  report.n_features = data.vocab.size();
  report.cv = cv;
  evaluate_test_set(report, data.y_test, scores);

  const auto final_dir = config.result_dir();
  fs::create_directories(final_dir.parent_path());
  StagedDirectory staged(final_dir);
  save_model(staged.path() / "model.json", {spec, model, data.vocab.fingerprint()});
  write_report(report, staged.path());
  if (grid) {
    std::ofstream csv(staged.path() / "grid.csv", std::ios::binary);
    write_grid_csv(csv, *grid);
    if (!csv) throw std::runtime_error("error writing grid.csv");
  }
  staged.commit();

  out << std::fixed << std::setprecision(4) << "cv accuracy " << cv.mean_accuracy * 100
      << "%, test accuracy " << report.test_accuracy * 100 << "%, macro F1 " << report.macro_f1
      << '\n'
      << "results written to " << final_dir.string() << '\n';
  out.unsetf(std::ios::floatfield);
  return {final_dir, std::move(report)};
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "train_file") c.train_file = config_value<std::string>(j, "train_file");
    else if (key == "test_file") c.test_file = config_value<std::string>(j, "test_file");
    else if (key == "condition") c.condition = config_value<std::string>(j, "condition");
    else if (key == "encoding") c.encoding = parse_encoding(config_value<std::string>(j, "encoding"));
    else if (key == "algorithm") c.algorithm = parse_algorithm(config_value<std::string>(j, "algorithm"));
    else if (key == "params" || key == "grid") {
      if (!value.is_object()) throw ConfigError("config key '" + key + "' must be an object");
      (key == "params" ? c.params : c.grid) = value;
    } else if (key == "k") c.k = config_value<std::size_t>(j, "k");
    else if (key == "seed") c.seed = config_value<std::uint64_t>(j, "seed");
    else if (key == "out") c.out_dir = config_value<std::string>(j, "out");
    else if (key == "threads") c.threads = config_value<unsigned>(j, "threads");
    else if (key == "stopwords") c.stopwords_file = config_value<std::string>(j, "stopwords");
    else throw ConfigError("unknown config key '" + key + "'");
  }
  return c;
}

RunConfig RunConfig::from_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

void RunConfig::validate_for(std::string_view command) const {
  if (train_file.empty()) throw ConfigError("a training file is required (--train-file)");
  if (command == "stats") return;
  if (test_file.empty()) throw ConfigError("a test file is required (--test-file)");
  if (condition.empty()) throw ConfigError("a condition is required (--condition)");
  if (!algorithm) throw ConfigError("an algorithm is required (--algo)");
  if (k < 2) throw ConfigError("k must be at least 2");
  if (command == "train") {
    (void)model_spec();
  } else {
    (void)grid_spec();
  }
}

ModelSpec RunConfig::model_spec() const {
  if (!algorithm) throw ConfigError("no algorithm configured");
  ModelSpec spec = default_spec(*algorithm);
  for (const auto& [name, value] : params.items()) apply_param(spec, name, value);
  set_seed(spec, seed);
  validate(spec);
  return spec;
}

GridSpec RunConfig::grid_spec() const {
  if (!algorithm) throw ConfigError("no algorithm configured");
  json j = grid;
  j["algorithm"] = algorithm_name(*algorithm);
  return GridSpec::from_json(j);
}

fs::path RunConfig::result_dir() const {
  return out_dir / path_component(condition) / std::string(encoding_name(encoding)) /
         std::string(algorithm ? algorithm_name(*algorithm) : "none");
}

std::string path_component(std::string_view name) {
  std::string out;
  for (char c : name) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                      c == '-' || c == '.';
    out.push_back(keep ? c : '_');
  }
  if (out.empty() || out == "." || out == "..") out = "_";
  return out;
}

json cmd_stats(const RunConfig& config, std::ostream& out) {
  config.validate_for("stats");
  const auto sw = stopwords_for(config);
  std::vector<ReviewRecord> all;
  json doc = {{"schema_version", 1}};

  auto load = [&](const fs::path& path, SplitTag tag) {
    auto loaded = load_tsv(path, tag);
    doc["files"][std::string(split_name(tag))] = {{"path", path.string()},
                                                  {"records", loaded.records.size()},
                                                  {"skipped_rows", loaded.skipped_rows}};
    out << split_name(tag) << ": " << loaded.records.size() << " records ("
        << loaded.skipped_rows << " skipped)\n";
    return std::move(loaded.records);
  };
  auto train = load(config.train_file, SplitTag::Train);
  std::vector<ReviewRecord> test;
  if (!config.test_file.empty()) test = load(config.test_file, SplitTag::Test);
  all = train;
  all.insert(all.end(), test.begin(), test.end());

  auto mix_json = [](const ClassDistribution& d) {
    json j;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      j[std::string(sentiment_name(sentiment_from_index(c)))] = d[c];
    }
    return j;
  };
  out << std::fixed << std::setprecision(4);
  if (!all.empty()) {
    const auto mix = class_distribution(all);
    doc["class_distribution"] = mix_json(mix);
    out << "class mix:";
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      out << ' ' << sentiment_name(sentiment_from_index(c)) << ' ' << mix[c];
    }
    out << '\n';
  } else {
    doc["class_distribution"] = nullptr;
  }

  // Most frequent conditions over both files.
  const auto counts = condition_counts(all);
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  json top = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(10, ranked.size()); ++i) {
    top.push_back({{"condition", ranked[i].first}, {"records", ranked[i].second}});
  }
  doc["distinct_conditions"] = counts.size();
  doc["top_conditions"] = top;

  if (!config.condition.empty()) {
    const auto train_slice = filter_condition(train, config.condition, SplitTag::Train);
    const auto test_slice = filter_condition(test, config.condition, SplitTag::Test);
    std::size_t vocab_size = 0;
    if (!train_slice.empty()) {
      const auto docs = clean_corpus(train_slice, sw);
      try {
        vocab_size = Vocabulary::fit(docs).size();
      } catch (const std::invalid_argument&) {
        vocab_size = 0;  // every review cleaned down to nothing
      }
    }
    json slice = {{"name", config.condition},
                  {"train", train_slice.size()},
                  {"test", test_slice.size()},
                  {"vocabulary_size", vocab_size}};
    slice["train_class_distribution"] =
        train_slice.empty() ? json(nullptr) : mix_json(class_distribution(train_slice));
    doc["condition"] = slice;
    out << "condition '" << config.condition << "': " << train_slice.size() << " train / "
        << test_slice.size() << " test, vocabulary " << vocab_size << '\n';
  }
  out.unsetf(std::ios::floatfield);

  fs::create_directories(config.out_dir);
  const auto path = config.out_dir / "stats.json";
  std::ofstream file(path, std::ios::binary);
  file << doc.dump(2) << '\n';
  if (!file) throw std::runtime_error("cannot write '" + path.string() + "'");
  return doc;
}

RunOutputs cmd_train(const RunConfig& config, std::ostream& out) {
  config.validate_for("train");
  const auto spec = config.model_spec();
  const auto data = prepare(config, out);
  out << config.k << "-fold cross-validation of " << algorithm_name(algorithm_of(spec)) << '\n';
  const auto plan = stratified_k_fold(data.y_train, config.k, config.seed);
  const auto cv = cross_validate(spec, data.X_train, data.y_train, plan, config.threads);
  return fit_and_report(config, data, spec, cv, out, nullptr);
}

RunOutputs cmd_gridsearch(const RunConfig& config, std::ostream& out) {
  config.validate_for("gridsearch");
  const auto grid = config.grid_spec();
  const auto base = config.model_spec();
  const auto data = prepare(config, out);
  out << "grid search over " << grid.size() << " cell(s), " << config.k << "-fold CV\n";
  const auto result =
      grid_search(grid, base, data.X_train, data.y_train, config.k, config.seed, config.threads);
  for (const auto& cell : result.cells) {
    if (!cell.result) log::warn("grid cell (" + describe(cell.spec) + ") failed: " + cell.error);
  }
  const auto& best = result.cells[result.best()];
  out << "best cell: " << describe(best.spec) << '\n';
  return fit_and_report(config, data, best.spec, *best.result, out, &result);
}

}  // namespace drugsent
