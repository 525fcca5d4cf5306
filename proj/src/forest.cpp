#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "drugsent/log.hpp"
#include "drugsent/models.hpp"
#include "drugsent/random.hpp"
#include "model_common.hpp"

namespace drugsent {
namespace {

using Counts = std::array<double, kNumClasses>;

constexpr double kMinImpurityDecrease = 1e-12;

double total(const Counts& c) { return c[0] + c[1] + c[2]; }

// Weighted Gini impurity times node weight: W - sum_k c_k^2 / W.
double weighted_gini(const Counts& c) {
  const double w = total(c);
  if (w <= 0.0) return 0.0;
  return w - (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]) / w;
}

// Column-compressed copy of the training matrix for per-feature scans.
struct ColumnMajor {
  std::vector<std::size_t> col_ptr;
  std::vector<std::uint32_t> rows;
  std::vector<double> values;

  explicit ColumnMajor(const DocTermMatrix& X) : col_ptr(X.cols() + 1, 0) {
    for (std::size_t i = 0; i < X.rows(); ++i) {
      for (auto c : X.row(i).columns) ++col_ptr[c + 1];
    }
    std::partial_sum(col_ptr.begin(), col_ptr.end(), col_ptr.begin());
    rows.resize(X.nnz());
    values.resize(X.nnz());
    std::vector<std::size_t> fill(col_ptr.begin(), col_ptr.end() - 1);
    for (std::size_t i = 0; i < X.rows(); ++i) {
      const auto r = X.row(i);
      for (std::size_t k = 0; k < r.nnz(); ++k) {
        const auto pos = fill[r.columns[k]]++;
        rows[pos] = static_cast<std::uint32_t>(i);
        values[pos] = r.values[k];
      }
    }
  }
  std::size_t nnz(std::size_t f) const { return col_ptr[f + 1] - col_ptr[f]; }
};

struct Split {
  std::int32_t feature = -1;
  double threshold = 0.0;
  double decrease = 0.0;
};

struct Entry {
  double value;
  std::uint8_t cls;
  double weight;
};

class TreeBuilder {
 public:
  TreeBuilder(const DocTermMatrix& X, const ColumnMajor& columns,
              std::span<const Sentiment> labels, const ForestParams& params)
      : X_(X), columns_(columns), labels_(labels), params_(params),
        node_mark_(X.rows(), -1) {
    std::size_t total_nnz = X.nnz();
    avg_row_nnz_ = X.rows() ? static_cast<double>(total_nnz) / static_cast<double>(X.rows()) : 0.0;
    const auto d = X.cols();
    n_candidates_ = params.max_features == MaxFeatures::All
                        ? d
                        : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
    n_candidates_ = std::max<std::size_t>(1, std::min(n_candidates_, d));
  }

  DecisionTree build(std::span<const double> sample_weight, Rng& rng) {
    weight_ = sample_weight;
    std::fill(node_mark_.begin(), node_mark_.end(), -1);
    DecisionTree tree;
    std::vector<std::size_t> root;
    for (std::size_t i = 0; i < weight_.size(); ++i) {
      if (weight_[i] > 0.0) root.push_back(i);
    }
    struct Pending {
      std::int32_t node;
      std::vector<std::size_t> samples;
    };
    std::vector<Pending> stack;
    tree.nodes.push_back(make_node(root, 0));
    stack.push_back({0, std::move(root)});
    while (!stack.empty()) {
      auto [node_id, samples] = std::move(stack.back());
      stack.pop_back();
      const auto depth = tree.nodes[node_id].depth;
      auto split = find_split(tree.nodes[node_id], samples, node_id, rng);
      if (split.feature < 0) continue;

      std::vector<std::size_t> left, right;
      for (auto s : samples) {
        (X_.at(s, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right)
            .push_back(s);
      }
      auto& node = tree.nodes[node_id];
      node.feature = split.feature;
      node.threshold = split.threshold;
      node.left = static_cast<std::int32_t>(tree.nodes.size());
      node.right = node.left + 1;
      tree.nodes.push_back(make_node(left, depth + 1));
      tree.nodes.push_back(make_node(right, depth + 1));
      // Right pushed first so the left subtree is expanded first.
      stack.push_back({node.right, std::move(right)});
      stack.push_back({node.left, std::move(left)});
    }
    return tree;
  }

 private:
  TreeNode make_node(const std::vector<std::size_t>& samples, std::int32_t depth) const {
    TreeNode node;
    node.depth = depth;
    for (auto s : samples) node.class_counts[class_index(labels_[s])] += weight_[s];
    return node;
  }

  std::vector<std::size_t> candidate_features(Rng& rng) const {
    const auto d = X_.cols();
    std::vector<std::size_t> out;
    if (n_candidates_ == d) {
      out.resize(d);
      std::iota(out.begin(), out.end(), std::size_t{0});
      return out;
    }
    // Floyd's sampling of n_candidates_ distinct features.
    std::set<std::size_t> chosen;
    for (std::size_t j = d - n_candidates_; j < d; ++j) {
      const auto t = static_cast<std::size_t>(rng.below(j + 1));
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    return {chosen.begin(), chosen.end()};
  }

  // Nonzero entries of feature f among the node's samples.
  void gather(std::size_t f, const std::vector<std::size_t>& samples, std::int32_t node_id,
              std::vector<Entry>& entries) const {
    entries.clear();
    const double row_cost =
        static_cast<double>(samples.size()) * (1.0 + std::log2(1.0 + avg_row_nnz_));
    if (row_cost < static_cast<double>(columns_.nnz(f))) {
      for (auto s : samples) {
        const double v = X_.at(s, f);
        if (v != 0.0) entries.push_back({v, static_cast<std::uint8_t>(labels_[s]), weight_[s]});
      }
      return;
    }
    for (auto k = columns_.col_ptr[f]; k < columns_.col_ptr[f + 1]; ++k) {
      const auto s = columns_.rows[k];
      if (node_mark_[s] == node_id) {
        entries.push_back(
            {columns_.values[k], static_cast<std::uint8_t>(labels_[s]), weight_[s]});
      }
    }
  }

  Split find_split(const TreeNode& node, const std::vector<std::size_t>& samples,
                   std::int32_t node_id, Rng& rng) {
    Split best;
    const double node_weight = total(node.class_counts);
    // Candidates are drawn even for nodes that end up as leaves, so the random
    // stream does not depend on which stopping rule fired.
    auto features = candidate_features(rng);
    if (node.depth >= params_.max_depth) return best;
    if (node_weight < static_cast<double>(params_.min_samples_split)) return best;
    const double parent = weighted_gini(node.class_counts);
    if (parent <= 0.0) return best;

    for (auto s : samples) node_mark_[s] = node_id;
    const double min_leaf = static_cast<double>(params_.min_samples_leaf);
    std::vector<Entry> entries;
    for (auto f : features) {
      gather(f, samples, node_id, entries);
      Counts zero = node.class_counts;
      for (const auto& e : entries) zero[e.cls] -= e.weight;
      // Rounding can leave tiny residues; bootstrap weights are integers.
      double zero_weight = 0.0;
      for (auto& z : zero) {
        z = std::round(z);
        zero_weight += z;
      }
      if (zero_weight > 0.0) {
        for (std::size_t c = 0; c < kNumClasses; ++c) {
          if (zero[c] > 0.0) entries.push_back({0.0, static_cast<std::uint8_t>(c), zero[c]});
        }
      }
      std::sort(entries.begin(), entries.end(),
                [](const Entry& a, const Entry& b) { return a.value < b.value; });

      Counts left{};
      for (std::size_t k = 0; k < entries.size();) {
        const double v = entries[k].value;
        while (k < entries.size() && entries[k].value == v) {
          left[entries[k].cls] += entries[k].weight;
          ++k;
        }
        if (k == entries.size()) break;
        Counts right;
        for (std::size_t c = 0; c < kNumClasses; ++c) right[c] = node.class_counts[c] - left[c];
        if (total(left) < min_leaf || total(right) < min_leaf) continue;
        const double decrease =
            (parent - weighted_gini(left) - weighted_gini(right)) / node_weight;
        if (decrease > best.decrease) {
          const double next = entries[k].value;
          double threshold = v + (next - v) / 2.0;
          if (!(threshold < next)) threshold = v;
          best = {static_cast<std::int32_t>(f), threshold, decrease};
        }
      }
    }
    if (best.decrease <= kMinImpurityDecrease) best.feature = -1;
    return best;
  }

  const DocTermMatrix& X_;
  const ColumnMajor& columns_;
  std::span<const Sentiment> labels_;
  const ForestParams& params_;
  std::vector<std::int32_t> node_mark_;
  std::span<const double> weight_;
  double avg_row_nnz_ = 0.0;
  std::size_t n_candidates_ = 1;
};

}  // namespace

int DecisionTree::depth() const {
  int d = 0;
  for (const auto& n : nodes) d = std::max(d, static_cast<int>(n.depth));
  return d;
}

ForestModel train_random_forest(const DocTermMatrix& X, std::span<const Sentiment> labels,
                                const ForestParams& params) {
  validate(ModelSpec{params});
  detail::check_training_input(X, labels);
  if (auto only = detail::single_class(labels)) {
    log::warn("training data has a single class (" + std::string(sentiment_name(*only)) +
              "); every tree is a single leaf");
  }
  ForestModel model;
  model.n_features = X.cols();
  const ColumnMajor columns(X);
  TreeBuilder builder(X, columns, labels, params);
  const std::size_t n = X.rows();
  std::vector<double> weight(n);
  for (int t = 0; t < params.num_trees; ++t) {
    Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(t)));
    if (params.bootstrap) {
      std::fill(weight.begin(), weight.end(), 0.0);
      for (std::size_t k = 0; k < n; ++k) weight[rng.below(n)] += 1.0;
    } else {
      std::fill(weight.begin(), weight.end(), 1.0);
    }
    model.trees.push_back(builder.build(weight, rng));
  }
  return model;
}

ScoreMatrix predict_scores(const ForestModel& model, const DocTermMatrix& X) {
  detail::check_prediction_input(model.n_features, X);
  ScoreMatrix out{X.rows(), std::vector<double>(X.rows() * kNumClasses, 0.0)};
  if (model.trees.empty()) return out;
  const double per_tree = 1.0 / static_cast<double>(model.trees.size());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    for (const auto& tree : model.trees) {
      std::size_t id = 0;
      while (!tree.nodes[id].is_leaf()) {
        const auto& node = tree.nodes[id];
        id = static_cast<std::size_t>(
            X.at(i, static_cast<std::size_t>(node.feature)) <= node.threshold ? node.left
                                                                              : node.right);
      }
      const auto& counts = tree.nodes[id].class_counts;
      const double w = total(counts);
      if (w <= 0.0) continue;
      for (std::size_t c = 0; c < kNumClasses; ++c) {
        out.values[i * kNumClasses + c] += per_tree * counts[c] / w;
      }
    }
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      auto& v = out.values[i * kNumClasses + c];
      v = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace drugsent
