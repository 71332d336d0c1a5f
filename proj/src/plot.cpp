#include "ctd/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ctd {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 620.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 390.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string fmt_tick(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> band;  // half-width; empty for plain lines
  bool dashed = false;
};

class Chart {
 public:
  Chart(std::string x_label, std::string y_label)
      : x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

  void add(Series series) { series_.push_back(std::move(series)); }

  // Dashed horizontal marker across the full x range (minimum lines).
  void add_level(double y, const std::string& color) {
    levels_.emplace_back(y, color);
  }

  std::string render() const;

 private:
  double sx(double x) const {
    return kLeft + (x - x_min_) / (x_max_ - x_min_) * (kRight - kLeft);
  }
  double sy(double y) const {
    return kBottom - (y - y_min_) / (y_max_ - y_min_) * (kBottom - kTop);
  }

  std::string x_label_;
  std::string y_label_;
  std::vector<Series> series_;
  std::vector<std::pair<double, std::string>> levels_;
  mutable double x_min_ = 0, x_max_ = 1, y_min_ = 0, y_max_ = 1;
};

std::string Chart::render() const {
  if (series_.empty()) throw std::runtime_error("chart has no data series");
  x_min_ = std::numeric_limits<double>::infinity();
  x_max_ = -x_min_;
  y_min_ = 0.0;  // both chart families are anchored at zero
  y_max_ = -std::numeric_limits<double>::infinity();
  for (const auto& s : series_) {
    if (s.x.empty()) throw std::runtime_error("empty data series: " + s.name);
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x_min_ = std::min(x_min_, s.x[i]);
      x_max_ = std::max(x_max_, s.x[i]);
      const double pad = s.band.empty() ? 0.0 : s.band[i];
      y_max_ = std::max(y_max_, s.y[i] + pad);
    }
  }
  if (x_max_ == x_min_) x_max_ = x_min_ + 1.0;
  if (y_max_ <= y_min_) y_max_ = y_min_ + 1.0;
  y_max_ *= 1.05;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes and ticks.
  out << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kBottom)
      << "\" x2=\"" << fmt(kRight) << "\" y2=\"" << fmt(kBottom)
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop) << "\" x2=\""
      << fmt(kLeft) << "\" y2=\"" << fmt(kBottom) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double tx = x_min_ + (x_max_ - x_min_) * i / 5.0;
    const double ty = y_min_ + (y_max_ - y_min_) * i / 5.0;
    out << "<line x1=\"" << fmt(sx(tx)) << "\" y1=\"" << fmt(kBottom)
        << "\" x2=\"" << fmt(sx(tx)) << "\" y2=\"" << fmt(kBottom + 5)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(sx(tx)) << "\" y=\"" << fmt(kBottom + 18)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt_tick(tx)
        << "</text>\n";
    out << "<line x1=\"" << fmt(kLeft - 5) << "\" y1=\"" << fmt(sy(ty))
        << "\" x2=\"" << fmt(kLeft) << "\" y2=\"" << fmt(sy(ty))
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(sy(ty) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt_tick(ty)
        << "</text>\n";
  }
  out << "<text x=\"" << fmt((kLeft + kRight) / 2) << "\" y=\""
      << fmt(kBottom + 36) << "\" font-size=\"13\" text-anchor=\"middle\">"
      << x_label_ << "</text>\n";
  out << "<text x=\"18\" y=\"" << fmt((kTop + kBottom) / 2)
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fmt((kTop + kBottom) / 2) << ")\">" << y_label_ << "</text>\n";

  // Confidence bands first so lines draw on top.
  for (std::size_t si = 0; si < series_.size(); ++si) {
    const Series& s = series_[si];
    if (s.band.empty()) continue;
    const char* color = kPalette[si % std::size(kPalette)];
    out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" "
        << "stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << fmt(sx(s.x[i])) << ','
          << fmt(sy(std::min(s.y[i] + s.band[i], y_max_))) << ' ';
    for (std::size_t i = s.x.size(); i-- > 0;)
      out << fmt(sx(s.x[i])) << ','
          << fmt(sy(std::max(s.y[i] - s.band[i], y_min_))) << ' ';
    out << "\"/>\n";
  }

  for (const auto& [level, color] : levels_) {
    out << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(sy(level))
        << "\" x2=\"" << fmt(kRight) << "\" y2=\"" << fmt(sy(level))
        << "\" stroke=\"" << color
        << "\" stroke-dasharray=\"6 3\" stroke-width=\"1\"/>\n";
  }

  for (std::size_t si = 0; si < series_.size(); ++si) {
    const Series& s = series_[si];
    const char* color = kPalette[si % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"";
    if (s.dashed) out << " stroke-dasharray=\"6 3\"";
    out << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << fmt(sx(s.x[i])) << ',' << fmt(sy(std::min(s.y[i], y_max_)))
          << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << fmt(kRight - 10) << "\" y=\""
        << fmt(kTop + 16.0 * (static_cast<double>(si) + 1.0))
        << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << color << "\">"
        << s.name << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

bool header_is(const CsvTable& table, const std::vector<std::string>& want) {
  return table.header == want;
}

std::string render_sweep(const CsvTable& table) {
  if (table.rows.empty()) throw std::runtime_error("CSV has no data rows");
  Chart chart("step size", "RMS value error");
  // Group rows by estimator in order of first appearance.
  std::vector<std::string> order;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string& name = table.rows[r][0];
    if (std::find(order.begin(), order.end(), name) == order.end())
      order.push_back(name);
  }
  std::size_t color = 0;
  for (const std::string& name : order) {
    Series series;
    series.name = name;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      if (table.rows[r][0] != name) continue;
      series.x.push_back(csv_field(table, r, "alpha"));
      series.y.push_back(csv_field(table, r, "mean_rms"));
      series.band.push_back(csv_field(table, r, "ci_half_width"));
    }
    const double lowest = *std::min_element(series.y.begin(), series.y.end());
    chart.add_level(lowest, kPalette[color % std::size(kPalette)]);
    chart.add(std::move(series));
    ++color;
  }
  return chart.render();
}

std::string render_variance(const CsvTable& table) {
  if (table.rows.empty()) throw std::runtime_error("CSV has no data rows");
  Chart chart("n-step length", "return variance");
  Series empirical, lower, upper;
  empirical.name = "empirical";
  lower.name = "model rho=0";
  lower.dashed = true;
  upper.name = "model rho=1";
  upper.dashed = true;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double n = csv_field(table, r, "n");
    empirical.x.push_back(n);
    empirical.y.push_back(csv_field(table, r, "empirical_variance"));
    lower.x.push_back(n);
    lower.y.push_back(csv_field(table, r, "model_rho0"));
    upper.x.push_back(n);
    upper.y.push_back(csv_field(table, r, "model_rho1"));
  }
  chart.add(std::move(empirical));
  chart.add(std::move(lower));
  chart.add(std::move(upper));
  return chart.render();
}

}  // namespace

std::string render_chart(const CsvTable& table) {
  if (header_is(table, {"estimator", "alpha", "mean_rms", "ci_half_width",
                        "trials"}))
    return render_sweep(table);
  if (header_is(table, {"n", "empirical_variance", "model_rho0", "model_rho1",
                        "standard_error"}))
    return render_variance(table);
  throw std::runtime_error("unrecognized CSV schema for plotting");
}

void plot_csv_file(const std::string& csv_path, const std::string& out_path) {
  const std::string svg = render_chart(parse_csv(read_file(csv_path)));
  write_file(out_path, svg);
}

}  // namespace ctd
