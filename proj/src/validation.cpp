#include "drugsent/validation.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "drugsent/metrics.hpp"
#include "drugsent/models.hpp"
#include "drugsent/parallel.hpp"
#include "drugsent/random.hpp"

namespace drugsent {

std::vector<std::size_t> FoldPlan::complement(std::size_t f) const {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < folds.size(); ++g) {
    if (g != f) out.insert(out.end(), folds[g].begin(), folds[g].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t FoldPlan::n() const {
  std::size_t total = 0;
  for (const auto& f : folds) total += f.size();
  return total;
}

FoldPlan stratified_k_fold(std::span<const Sentiment> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("k-fold needs k >= 2");
  if (labels.size() < k) {
    throw std::invalid_argument("cannot split " + std::to_string(labels.size()) +
                                " samples into " + std::to_string(k) + " folds");
  }
  std::array<std::vector<std::size_t>, kNumClasses> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[class_index(labels[i])].push_back(i);

  FoldPlan plan{k, std::vector<std::vector<std::size_t>>(k)};
  Rng rng(seed);
  std::size_t cursor = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    auto& members = by_class[c];
    if (members.empty()) continue;
    if (members.size() < k) {
      throw std::invalid_argument("class " + std::string(sentiment_name(sentiment_from_index(c))) +
                                  " has " + std::to_string(members.size()) +
                                  " samples, fewer than k = " + std::to_string(k));
    }
    rng.shuffle(std::span(members));
    for (auto idx : members) {
      plan.folds[cursor].push_back(idx);
      cursor = (cursor + 1) % k;
    }
  }
  for (auto& f : plan.folds) std::sort(f.begin(), f.end());
  return plan;
}

CvResult cross_validate(const ModelSpec& spec, const DocTermMatrix& X,
                        std::span<const Sentiment> labels, const FoldPlan& plan,
                        unsigned threads) {
  if (plan.n() != X.rows() || X.rows() != labels.size()) {
    throw std::invalid_argument("fold plan does not cover the training rows");
  }
  CvResult result;
  result.fold_accuracies.resize(plan.k);
  parallel_for(plan.k, threads, [&](std::size_t f) {
    try {
      const auto train_idx = plan.complement(f);
      const auto& test_idx = plan.folds[f];
      std::vector<Sentiment> y_train, y_test;
      for (auto i : train_idx) y_train.push_back(labels[i]);
      for (auto i : test_idx) y_test.push_back(labels[i]);
      const auto model = train_model(spec, X.select_rows(train_idx), y_train);
      result.fold_accuracies[f] = accuracy(predict_labels(model, X.select_rows(test_idx)), y_test);
    } catch (const std::exception& e) {
      throw std::runtime_error("fold " + std::to_string(f) + ": " + e.what());
    }
  });
  result.mean_accuracy =
      std::accumulate(result.fold_accuracies.begin(), result.fold_accuracies.end(), 0.0) /
      static_cast<double>(plan.k);
  return result;
}

GridSpec GridSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("algorithm") || !j["algorithm"].is_string()) {
    throw ConfigError("grid needs a string 'algorithm' field");
  }
  GridSpec grid;
  grid.algorithm = parse_algorithm(j["algorithm"].get<std::string>());
  ModelSpec probe = default_spec(grid.algorithm);
  for (const auto& [name, values] : j.items()) {
    if (name == "algorithm") continue;
    if (!values.is_array() || values.empty()) {
      throw ConfigError("grid axis '" + name + "' must be a nonempty array");
    }
    for (const auto& v : values) apply_param(probe, name, v);
    grid.axes.emplace_back(name, values.get<std::vector<nlohmann::json>>());
  }
  return grid;
}

nlohmann::json GridSpec::to_json() const {
  nlohmann::json j;
  j["algorithm"] = algorithm_name(algorithm);
  for (const auto& [name, values] : axes) j[name] = values;
  return j;
}

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (const auto& axis : axes) n *= axis.second.size();
  return n;
}

std::vector<ModelSpec> GridSpec::expand(const ModelSpec& base) const {
  if (algorithm_of(base) != algorithm) {
    throw ConfigError("grid algorithm does not match the base spec");
  }
  std::vector<ModelSpec> out;
  const std::size_t total = size();
  out.reserve(total);
  std::vector<std::size_t> digit(axes.size(), 0);
  for (std::size_t cell = 0; cell < total; ++cell) {
    ModelSpec spec = base;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      apply_param(spec, axes[a].first, axes[a].second[digit[a]]);
    }
    validate(spec);
    out.push_back(std::move(spec));
    for (std::size_t a = axes.size(); a-- > 0;) {
      if (++digit[a] < axes[a].second.size()) break;
      digit[a] = 0;
    }
  }
  return out;
}

GridResult grid_search(const GridSpec& grid, const ModelSpec& base, const DocTermMatrix& X,
                       std::span<const Sentiment> labels, std::size_t k, std::uint64_t seed,
                       unsigned threads) {
  const auto plan = stratified_k_fold(labels, k, seed);
  GridResult result;
  for (auto& spec : grid.expand(base)) result.cells.push_back({std::move(spec), {}, {}});
  parallel_for(result.cells.size(), threads, [&](std::size_t i) {
    auto& cell = result.cells[i];
    try {
      cell.result = cross_validate(cell.spec, X, labels, plan, 1);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    if (result.cells[i].result) result.ranking.push_back(i);
  }
  if (result.ranking.empty()) {
    throw std::runtime_error("every grid cell failed; first error: " + result.cells.front().error);
  }
  std::stable_sort(result.ranking.begin(), result.ranking.end(), [&](std::size_t a, std::size_t b) {
    return result.cells[a].result->mean_accuracy > result.cells[b].result->mean_accuracy;
  });
  return result;
}

namespace {
std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else if (c == '\n' || c == '\r') out += ' ';
    else out += c;
  }
  return out + "\"";
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void write_grid_csv(std::ostream& out, const GridResult& result) {
  std::size_t k = 0;
  for (const auto& c : result.cells) {
    if (c.result) k = std::max(k, c.result->fold_accuracies.size());
  }
  out << "rank,cell,mean_accuracy";
  for (std::size_t f = 0; f < k; ++f) out << ",fold" << f;
  out << ",params,error\n";
  std::size_t rank = 0;
  for (auto i : result.ranking) {
    const auto& c = result.cells[i];
    out << ++rank << ',' << i << ',' << number(c.result->mean_accuracy);
    for (double a : c.result->fold_accuracies) out << ',' << number(a);
    out << ',' << csv_quote(describe(c.spec)) << ",\n";
  }
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const auto& c = result.cells[i];
    if (c.result) continue;
    out << ',' << i << ',';
    for (std::size_t f = 0; f < k; ++f) out << ',';
    out << ',' << csv_quote(describe(c.spec)) << ',' << csv_quote(c.error) << '\n';
  }
}

}  // namespace drugsent
