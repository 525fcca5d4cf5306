#include "drugsent/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace drugsent {

using nlohmann::json;

namespace {

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw std::runtime_error("error writing '" + path.string() + "'");
}

std::string render_svg(const Curve& curve, bool roc, Sentiment cls, double f1) {
  constexpr double kSize = 400.0, kMargin = 50.0, kPlot = kSize - 2 * kMargin;
  auto px = [&](double x) { return fixed(kMargin + x * kPlot, 2); };
  auto py = [&](double y) { return fixed(kSize - kMargin - y * kPlot, 2); };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" "
       "viewBox=\"0 0 400 400\">\n";
  s << "<rect width=\"400\" height=\"400\" fill=\"white\"/>\n";
  s << "<text x=\"200\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"14\">"
    << (roc ? "ROC" : "Precision-Recall") << " - " << sentiment_name(cls) << " ("
    << (roc ? "AUC " : "AP ") << fixed(curve.area, 4) << ", F1 " << fixed(f1, 4) << ")</text>\n";
  s << "<rect x=\"50\" y=\"50\" width=\"300\" height=\"300\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = t / 4.0;
    s << "<text x=\"" << px(v) << "\" y=\"368\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"10\">" << fixed(v, 2) << "</text>\n";
    s << "<text x=\"44\" y=\"" << py(v) << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"10\">" << fixed(v, 2) << "</text>\n";
  }
  s << "<text x=\"200\" y=\"390\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"12\">" << (roc ? "False positive rate" : "Recall") << "</text>\n";
  s << "<text x=\"14\" y=\"200\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"12\" transform=\"rotate(-90 14 200)\">"
    << (roc ? "True positive rate" : "Precision") << "</text>\n";
  if (roc) {
    s << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\""
      << py(1) << "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
  }
  s << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (std::size_t k = 0; k < curve.points.size(); ++k) {
    if (k) s << ' ';
    s << px(curve.points[k].x) << ',' << py(curve.points[k].y);
  }
  s << "\"/>\n</svg>\n";
  return s.str();
}

}  // namespace

void evaluate_test_set(EvalReport& report, std::span<const Sentiment> truth,
                       const ScoreMatrix& scores) {
  if (scores.rows != truth.size()) throw std::invalid_argument("score rows != test labels");
  const auto predicted = predict_labels(scores);
  report.n_test = truth.size();
  report.test_accuracy = accuracy(predicted, truth);
  report.confusion = confusion_matrix(predicted, truth);
  report.macro_f1 = 0.0;
  double roc_sum = 0.0, ap_sum = 0.0;
  std::size_t with_curves = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const auto cls = sentiment_from_index(c);
    report.f1[c] = f1_score(predicted, truth, cls);
    report.macro_f1 += report.f1[c] / static_cast<double>(kNumClasses);

    // std::vector<bool> is not contiguous, so the flags live in a plain array.
    auto is_class = std::make_unique<bool[]>(truth.size());
    std::size_t positives = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      is_class[i] = truth[i] == cls;
      positives += is_class[i];
    }
    report.roc[c].reset();
    report.pr[c].reset();
    if (positives == 0 || positives == truth.size()) continue;
    const auto class_scores = scores.column(c);
    const std::span<const bool> truth_span(is_class.get(), truth.size());
    report.roc[c] = roc_curve(class_scores, truth_span);
    report.pr[c] = pr_curve(class_scores, truth_span);
    roc_sum += report.roc[c]->area;
    ap_sum += report.pr[c]->area;
    ++with_curves;
  }
  if (with_curves > 0) {
    report.macro_roc_auc = roc_sum / static_cast<double>(with_curves);
    report.macro_average_precision = ap_sum / static_cast<double>(with_curves);
  } else {
    report.macro_roc_auc.reset();
    report.macro_average_precision.reset();
  }
}

json report_to_json(const EvalReport& r) {
  json classes = json::object();
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const auto& roc = r.roc[c];
    const auto& pr = r.pr[c];
    classes[std::string(sentiment_name(sentiment_from_index(c)))] = {
        {"f1", r.f1[c]},
        {"roc_auc", roc ? json(roc->area) : json(nullptr)},
        {"average_precision", pr ? json(pr->area) : json(nullptr)},
    };
  }
  json confusion = json::array();
  for (const auto& row : r.confusion) confusion.push_back(row);
  return {
      {"schema_version", kMetricsSchemaVersion},
      {"spec", to_json(r.spec)},
      {"data",
       {{"condition", r.condition},
        {"encoding", encoding_name(r.encoding)},
        {"n_train", r.n_train},
        {"n_test", r.n_test},
        {"n_features", r.n_features}}},
      {"cross_validation",
       {{"k", r.cv.fold_accuracies.size()},
        {"mean_accuracy", r.cv.mean_accuracy},
        {"fold_accuracies", r.cv.fold_accuracies}}},
      {"test",
       {{"accuracy", r.test_accuracy},
        {"confusion_matrix", confusion},
        {"confusion_matrix_layout", "rows = true class, columns = predicted class, "
                                    "order negative, neutral, positive"},
        {"classes", classes},
        {"macro_f1", r.macro_f1},
        {"macro_roc_auc", optional_number(r.macro_roc_auc)},
        {"macro_average_precision", optional_number(r.macro_average_precision)},
        {"curves_file", "curves.csv"}}},
  };
}

void write_report(const EvalReport& report, const std::filesystem::path& out_dir) {
  std::size_t curves = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    for (const auto* curve : {&report.roc[c], &report.pr[c]}) {
      if (!curve->has_value()) continue;
      if ((*curve)->points.empty()) {
        throw std::runtime_error("empty curve series for class " +
                                 std::string(sentiment_name(sentiment_from_index(c))));
      }
      ++curves;
    }
  }
  if (curves == 0) throw std::runtime_error("report has no ROC/PR curves to write");

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + out_dir.string() + "': " + ec.message());

  write_file(out_dir / "metrics.json", report_to_json(report).dump(2) + "\n");

  std::ostringstream csv;
  csv << "class,curve,x,y,threshold\n";
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const auto name = sentiment_name(sentiment_from_index(c));
    for (const auto& [label, curve] : {std::pair{"roc", &report.roc[c]}, std::pair{"pr", &report.pr[c]}}) {
      if (!curve->has_value()) continue;
      for (const auto& p : (*curve)->points) {
        csv << name << ',' << label << ',' << number(p.x) << ',' << number(p.y) << ','
            << number(p.threshold) << '\n';
      }
    }
  }
  write_file(out_dir / "curves.csv", csv.str());

  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const auto cls = sentiment_from_index(c);
    const auto name = std::string(sentiment_name(cls));
    if (report.roc[c]) {
      write_file(out_dir / ("roc_" + name + ".svg"), render_svg(*report.roc[c], true, cls, report.f1[c]));
    }
    if (report.pr[c]) {
      write_file(out_dir / ("pr_" + name + ".svg"), render_svg(*report.pr[c], false, cls, report.f1[c]));
    }
  }
}

}  // namespace drugsent
