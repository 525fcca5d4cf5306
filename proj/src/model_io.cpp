#include "drugsent/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace drugsent {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "drugsent-model";

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex64(const std::string& s) {
  std::size_t used = 0;
  auto v = std::stoull(s, &used, 16);
  if (used != s.size()) throw std::runtime_error("bad fingerprint '" + s + "'");
  return v;
}

json linear_to_json(const LinearModel& m) {
  json weights = json::array();
  for (const auto& w : m.weights) weights.push_back(w);
  return {{"kind", "linear"}, {"n_features", m.n_features}, {"weights", weights},
          {"bias", m.bias}};
}

json forest_to_json(const ForestModel& m) {
  json trees = json::array();
  for (const auto& tree : m.trees) {
    std::vector<std::int32_t> feature, left, right, depth;
    std::vector<double> threshold, counts;
    for (const auto& n : tree.nodes) {
      feature.push_back(n.feature);
      left.push_back(n.left);
      right.push_back(n.right);
      depth.push_back(n.depth);
      threshold.push_back(n.threshold);
      counts.insert(counts.end(), n.class_counts.begin(), n.class_counts.end());
    }
    trees.push_back({{"feature", feature}, {"threshold", threshold}, {"left", left},
                     {"right", right}, {"depth", depth}, {"class_counts", counts}});
  }
  return {{"kind", "forest"}, {"n_features", m.n_features}, {"trees", trees}};
}

json mlp_to_json(const MlpModel& m) {
  json layers = json::array();
  for (const auto& l : m.layers) {
    layers.push_back({{"in", l.in}, {"out", l.out}, {"weights", l.weights}, {"bias", l.bias}});
  }
  return {{"kind", "mlp"}, {"n_features", m.n_features},
          {"activation", activation_name(m.activation)}, {"layers", layers}};
}

void expect(bool ok, const char* what) {
  if (!ok) throw std::runtime_error(std::string("malformed model file: ") + what);
}

LinearModel linear_from_json(const json& j, Algorithm algorithm) {
  LinearModel m;
  m.algorithm = algorithm;
  m.n_features = j.at("n_features").get<std::size_t>();
  const auto& weights = j.at("weights");
  expect(weights.size() == kNumClasses, "linear weights must have 3 rows");
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    m.weights[c] = weights[c].get<std::vector<double>>();
    expect(m.weights[c].size() == m.n_features, "weight length != n_features");
  }
  m.bias = j.at("bias").get<std::array<double, kNumClasses>>();
  return m;
}

ForestModel forest_from_json(const json& j) {
  ForestModel m;
  m.n_features = j.at("n_features").get<std::size_t>();
  for (const auto& t : j.at("trees")) {
    auto feature = t.at("feature").get<std::vector<std::int32_t>>();
    auto threshold = t.at("threshold").get<std::vector<double>>();
    auto left = t.at("left").get<std::vector<std::int32_t>>();
    auto right = t.at("right").get<std::vector<std::int32_t>>();
    auto depth = t.at("depth").get<std::vector<std::int32_t>>();
    auto counts = t.at("class_counts").get<std::vector<double>>();
    const auto n = feature.size();
    expect(n > 0 && threshold.size() == n && left.size() == n && right.size() == n &&
               depth.size() == n && counts.size() == n * kNumClasses,
           "tree arrays differ in length");
    DecisionTree tree;
    for (std::size_t k = 0; k < n; ++k) {
      TreeNode node{feature[k], threshold[k], left[k], right[k], depth[k], {}};
      std::copy_n(counts.begin() + static_cast<std::ptrdiff_t>(k * kNumClasses), kNumClasses,
                  node.class_counts.begin());
      if (!node.is_leaf()) {
        expect(static_cast<std::size_t>(node.feature) < m.n_features, "feature out of range");
        expect(node.left > static_cast<std::int32_t>(k) && node.right > static_cast<std::int32_t>(k) &&
                   static_cast<std::size_t>(node.left) < n && static_cast<std::size_t>(node.right) < n,
               "child index out of range");
      }
      tree.nodes.push_back(node);
    }
    m.trees.push_back(std::move(tree));
  }
  return m;
}

MlpModel mlp_from_json(const json& j) {
  MlpModel m;
  m.n_features = j.at("n_features").get<std::size_t>();
  m.activation = parse_activation(j.at("activation").get<std::string>());
  std::size_t in = m.n_features;
  for (const auto& l : j.at("layers")) {
    DenseLayer layer{l.at("in").get<std::size_t>(), l.at("out").get<std::size_t>(),
                     l.at("weights").get<std::vector<double>>(),
                     l.at("bias").get<std::vector<double>>()};
    expect(layer.in == in, "layer dimensions do not chain");
    expect(layer.weights.size() == layer.in * layer.out && layer.bias.size() == layer.out,
           "layer parameter length");
    in = layer.out;
    m.layers.push_back(std::move(layer));
  }
  expect(!m.layers.empty() && in == kNumClasses, "output layer must have 3 units");
  return m;
}

}  // namespace

json model_to_json(const SavedModel& saved) {
  json model = std::visit(
      [](const auto& m) -> json {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LinearModel>) return linear_to_json(m);
        else if constexpr (std::is_same_v<M, ForestModel>) return forest_to_json(m);
        else return mlp_to_json(m);
      },
      saved.model);
  return {{"format", kFormat},
          {"format_version", kModelFormatVersion},
          {"spec", to_json(saved.spec)},
          {"seed", spec_seed(saved.spec)},
          {"vocabulary_fingerprint", hex64(saved.vocabulary_fingerprint)},
          {"model", std::move(model)}};
}

SavedModel model_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != kFormat) {
      throw std::runtime_error("not a drugsent model file");
    }
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw std::runtime_error("unsupported model format version " + std::to_string(version));
    }
    SavedModel saved{spec_from_json(j.at("spec")), LinearModel{},
                     parse_hex64(j.at("vocabulary_fingerprint").get<std::string>())};
    const auto& m = j.at("model");
    const auto kind = m.at("kind").get<std::string>();
    const auto algorithm = algorithm_of(saved.spec);
    if (kind == "linear") {
      expect(algorithm == Algorithm::LogReg || algorithm == Algorithm::Svm, "kind/spec mismatch");
      saved.model = linear_from_json(m, algorithm);
    } else if (kind == "forest") {
      expect(algorithm == Algorithm::RandomForest, "kind/spec mismatch");
      saved.model = forest_from_json(m);
    } else if (kind == "mlp") {
      expect(algorithm == Algorithm::Mlp, "kind/spec mismatch");
      saved.model = mlp_from_json(m);
    } else {
      throw std::runtime_error("unknown model kind '" + kind + "'");
    }
    return saved;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const SavedModel& saved) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << model_to_json(saved).dump() << '\n';
  if (!out) throw std::runtime_error("error writing '" + path.string() + "'");
}

SavedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return model_from_json(j);
}

}  // namespace drugsent
