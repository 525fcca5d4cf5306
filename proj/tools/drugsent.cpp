// Command-line front end: drugsent {stats,train,gridsearch} [flags]
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or config error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "drugsent/log.hpp"
#include "drugsent/pipeline.hpp"
#include "drugsent/types.hpp"

namespace {

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> train_file;
  std::optional<std::string> test_file;
  std::optional<std::string> condition;
  std::optional<std::string> encoding;
  std::optional<std::string> algo;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::optional<std::string> stopwords;
  bool quiet = false;
};

void add_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config, "JSON run config; flags override its values");
  cmd.add_option("--train-file", f.train_file, "drugsCom training TSV");
  cmd.add_option("--test-file", f.test_file, "drugsCom test TSV");
  cmd.add_option("--condition", f.condition, "condition to slice, e.g. \"Birth Control\"");
  cmd.add_option("--encoding", f.encoding, "count or tfidf");
  cmd.add_option("--algo", f.algo, "logreg, svm, rf or mlp");
  cmd.add_option("--seed", f.seed, "seed for folds and model initialization");
  cmd.add_option("--out", f.out, "output directory");
  cmd.add_option("--threads", f.threads, "worker threads (0 = all cores)");
  cmd.add_option("--stopwords", f.stopwords, "stopword list, one token per line");
  cmd.add_flag("--quiet", f.quiet, "suppress warnings and progress on stderr");
}

drugsent::RunConfig resolve(const Flags& f) {
  using drugsent::RunConfig;
  RunConfig c = f.config ? RunConfig::from_file(*f.config) : RunConfig{};
  if (f.train_file) c.train_file = *f.train_file;
  if (f.test_file) c.test_file = *f.test_file;
  if (f.condition) c.condition = *f.condition;
  if (f.encoding) c.encoding = drugsent::parse_encoding(*f.encoding);
  if (f.algo) c.algorithm = drugsent::parse_algorithm(*f.algo);
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.out_dir = *f.out;
  if (f.threads) c.threads = *f.threads;
  if (f.stopwords) c.stopwords_file = *f.stopwords;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drug review sentiment classification pipeline"};
  app.require_subcommand(1);
  Flags flags;
  auto* stats = app.add_subcommand("stats", "corpus statistics and class distribution");
  auto* train = app.add_subcommand("train", "train one model, cross-validate and evaluate");
  auto* grid = app.add_subcommand("gridsearch", "grid search, then train and evaluate the best cell");
  for (auto* cmd : {stats, train, grid}) add_flags(*cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  drugsent::log::set_quiet(flags.quiet);
  try {
    const auto config = resolve(flags);
    if (stats->parsed()) {
      drugsent::cmd_stats(config, std::cout);
    } else if (train->parsed()) {
      drugsent::cmd_train(config, std::cout);
    } else {
      drugsent::cmd_gridsearch(config, std::cout);
    }
  } catch (const drugsent::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
