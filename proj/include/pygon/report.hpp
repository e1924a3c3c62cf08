#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pygon/harness.hpp"
#include "pygon/thresholds.hpp"

namespace pygon {

// Shortest decimal that round-trips (up to 17 significant digits).
inline std::string format_real(double x) {
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

inline std::string format_fixed(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

inline constexpr const char* kSweepCsvHeader =
    "kind,n,p,k,feature_set,mean_recovery,std_recovery,clean_success_rate,seed";

inline std::string sweep_csv_row(const ExperimentConfig& cfg, const ExperimentResult& r) {
  std::ostringstream os;
  os << to_string(cfg.kind.variant) << ',' << cfg.n << ',' << format_real(cfg.p) << ',' << cfg.k << ','
     << to_string(cfg.feature_set) << ',' << format_fixed(r.mean_recovery) << ',' << format_fixed(r.std_recovery)
     << ',' << format_fixed(r.clean_success_rate) << ',' << r.master_seed.value;
  return os.str();
}

inline constexpr const char* kFoldCsvHeader = "fold,train_seed,best_epoch,epochs_run,best_eval_loss,beta,gamma";

inline std::string fold_csv_row(const FoldResult& f) {
  std::ostringstream os;
  os << f.fold << ',' << f.train_seed.value << ',' << f.best_epoch << ',' << f.epochs_run << ','
     << format_real(f.best_eval_loss) << ',' << format_real(f.beta) << ',' << format_real(f.gamma);
  return os.str();
}

inline constexpr const char* kGraphCsvHeader = "graph,fold,recovery,clean_success";

inline void write_graph_rows(std::ostream& os, const ExperimentResult& r) {
  os << kGraphCsvHeader << '\n';
  for (const auto& f : r.folds) {
    for (auto i : f.test_graphs) {
      os << i << ',' << f.fold << ',' << format_fixed(r.recovery[i]) << ','
         << (r.clean_success.empty() ? std::string("") : std::to_string(int(r.clean_success[i]))) << '\n';
    }
  }
}

inline constexpr const char* kRegressionCsvHeader = "feature_set,alpha,points";

// points rendered as "n:k" pairs joined by ';'.
inline std::string regression_csv_row(FeatureSet fs, double alpha, std::span<const std::pair<double, double>> pts) {
  std::ostringstream os;
  os << to_string(fs) << ',' << format_fixed(alpha) << ',';
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) os << ';';
    os << format_real(pts[i].first) << ':' << format_real(pts[i].second);
  }
  return os.str();
}

inline constexpr const char* kThresholdCsvHeader = "kind,n,p,q,k_scan,k_closed_form";

inline std::string threshold_csv_row(const ThresholdQuery& q) {
  std::ostringstream os;
  os << to_string(q.kind.variant) << ',' << q.n << ',' << format_real(q.p) << ','
     << (q.kind.variant == SubgraphVariant::DenseGnq ? format_real(q.kind.q) : std::string()) << ','
     << threshold_scan(q) << ',' << format_fixed(closed_form_threshold(q), 4);
  return os.str();
}

// ---------------------------------------------------------------------------
// Minimal SVG line charts.

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
};

inline std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                                  const std::vector<Series>& series) {
  constexpr double W = 640, H = 420, L = 70, R = 160, T = 40, B = 60;
  double x0 = 1e300, x1 = -1e300, y0 = 0.0, y1 = -1e300;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  if (x0 > x1) x0 = 0, x1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x0 + (x1 - x0) * t / 4.0, yv = y0 + (y1 - y0) * t / 4.0;
    os << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << format_real(std::round(xv * 100) / 100) << "</text>\n";
    os << "<text x=\"" << L - 8 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << format_real(std::round(yv * 100) / 100) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  os << "<text transform=\"translate(18," << (T + H - B) / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << y_label << "</text>\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* c = colors[si % 6];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
    for (const auto& [x, y] : s.points) os << px(x) << ',' << py(y) << ' ';
    os << "\"/>\n";
    for (const auto& [x, y] : s.points) os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << c << "\"/>\n";
    os << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 * (si + 1) << "\" fill=\"" << c << "\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

}  // namespace pygon
