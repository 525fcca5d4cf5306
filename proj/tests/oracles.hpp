#pragma once

// Brute-force reference computations. Kept deliberately naive and separate
// from the library code paths they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "drugsent/random.hpp"
#include "drugsent/types.hpp"

namespace drugsent::oracle {

struct DenseTfIdf {
  std::vector<std::string> terms;          // sorted
  std::vector<std::vector<double>> count;  // [doc][term]
  std::vector<std::vector<double>> weight; // [doc][term]
};

/// Loops over every (term, document) pair.
inline DenseTfIdf dense_tfidf(const std::vector<std::vector<std::string>>& docs) {
  DenseTfIdf out;
  std::set<std::string> all;
  for (const auto& d : docs) all.insert(d.begin(), d.end());
  out.terms.assign(all.begin(), all.end());
  const double N = static_cast<double>(docs.size());
  const std::size_t T = out.terms.size();
  out.count.assign(docs.size(), std::vector<double>(T, 0.0));
  out.weight.assign(docs.size(), std::vector<double>(T, 0.0));
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (std::size_t t = 0; t < T; ++t) {
      for (const auto& tok : docs[d]) {
        if (tok == out.terms[t]) out.count[d][t] += 1.0;
      }
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    double df = 0.0;
    for (std::size_t d = 0; d < docs.size(); ++d) df += out.count[d][t] > 0.0 ? 1.0 : 0.0;
    const double idf = std::log(N / df);
    for (std::size_t d = 0; d < docs.size(); ++d) {
      double V = 0.0;
      for (std::size_t u = 0; u < T; ++u) V += out.count[d][u];
      out.weight[d][t] = V > 0.0 ? (out.count[d][t] / V) * idf : 0.0;
    }
  }
  return out;
}

/// Random corpus over a pool of `vocab` two-letter-plus terms.
inline std::vector<std::vector<std::string>> random_corpus(Rng& rng, std::size_t max_docs,
                                                           std::size_t vocab) {
  std::vector<std::string> pool;
  for (std::size_t t = 0; t < vocab; ++t) {
    std::string term;
    std::size_t x = t;
    do {
      term += static_cast<char>('a' + x % 26);
      x /= 26;
    } while (x > 0);
    pool.push_back("w" + term);
  }
  const auto n_docs = 1 + rng.below(max_docs);
  std::vector<std::vector<std::string>> docs(n_docs);
  for (auto& d : docs) {
    const auto len = rng.below(30);  // empty documents allowed
    for (std::uint64_t k = 0; k < len; ++k) {
      // Skewed draw so some terms are frequent and df = N occurs.
      const double u = rng.uniform();
      d.push_back(pool[static_cast<std::size_t>(u * u * static_cast<double>(vocab))]);
    }
  }
  if (std::all_of(docs.begin(), docs.end(), [](const auto& d) { return d.empty(); })) {
    docs[0].push_back(pool[0]);
  }
  return docs;
}

/// P(score_pos > score_neg) + 0.5 P(tie) over all positive/negative pairs.
inline double mann_whitney_auc(const std::vector<double>& scores, const std::vector<bool>& truth) {
  double concordant = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!truth[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (truth[j]) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) concordant += 1.0;
      else if (scores[i] == scores[j]) concordant += 0.5;
    }
  }
  return concordant / pairs;
}

/// Central differences of f at x, step h.
inline std::vector<double> numeric_gradient(const std::function<double(const std::vector<double>&)>& f,
                                            std::vector<double> x, double h = 1e-5) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double up = f(x);
    x[i] = orig - h;
    const double down = f(x);
    x[i] = orig;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

/// ||a - b|| / max(||a|| + ||b||, tiny).
inline double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double denom = std::sqrt(na) + std::sqrt(nb);
  return denom < 1e-300 ? 0.0 : std::sqrt(diff) / denom;
}

/// Checks disjointness, completeness and per-class spread <= 1.
inline bool fold_plan_valid(const std::vector<std::vector<std::size_t>>& folds,
                            const std::vector<Sentiment>& labels, std::string& why) {
  std::vector<int> seen(labels.size(), 0);
  for (const auto& f : folds) {
    for (auto i : f) {
      if (i >= labels.size()) {
        why = "index out of range";
        return false;
      }
      if (seen[i]++) {
        why = "index in two folds";
        return false;
      }
    }
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!seen[i]) {
      why = "index missing";
      return false;
    }
  }
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    std::size_t lo = SIZE_MAX, hi = 0;
    for (const auto& f : folds) {
      std::size_t n = 0;
      for (auto i : f) n += class_index(labels[i]) == c;
      lo = std::min(lo, n);
      hi = std::max(hi, n);
    }
    if (hi - lo > 1) {
      why = "class spread " + std::to_string(hi - lo);
      return false;
    }
  }
  return true;
}

}  // namespace drugsent::oracle
