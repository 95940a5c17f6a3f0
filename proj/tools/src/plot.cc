// Copyright 2026 The sparsenode Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "sparsenode_tools/plot.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sparsenode/error.h"
#include "sparsenode_tools/run_config.h"

namespace sparsenode::tools {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Table = std::map<std::string, std::vector<double>>;

Table read_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<std::string> names;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) names.push_back(cell);
  }
  Table t;
  for (const auto& n : names) t[n];
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    for (const auto& n : names) {
      if (!std::getline(ss, cell, ',')) cell.clear();
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      t[n].push_back(end != cell.c_str() ? v : kNaN);
    }
  }
  return t;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  std::string label;
  bool markers = false;
  std::string dash;
};

struct Rule {
  double at;
  std::string color;
  std::string label;
};

class Chart {
 public:
  Chart(std::string title, std::string xlabel, std::string ylabel)
      : title_(std::move(title)), xlabel_(std::move(xlabel)),
        ylabel_(std::move(ylabel)) {}

  Chart& log_x() { log_x_ = true; return *this; }
  Chart& log_y() { log_y_ = true; return *this; }
  Chart& add(Series s) { series_.push_back(std::move(s)); return *this; }
  Chart& hline(double y, std::string color, std::string label) {
    hlines_.push_back({y, std::move(color), std::move(label)});
    return *this;
  }
  Chart& vline(double x, std::string color, std::string label) {
    vlines_.push_back({x, std::move(color), std::move(label)});
    return *this;
  }

  std::string render() const;

 private:
  static constexpr double kW = 640, kH = 400;
  static constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

  double tx(double v) const { return log_x_ ? std::log10(v) : v; }
  double ty(double v) const { return log_y_ ? std::log10(v) : v; }
  double px(double v) const {
    return kLeft + (tx(v) - x0_) / (x1_ - x0_) * (kW - kLeft - kRight);
  }
  double py(double v) const {
    return kH - kBottom - (ty(v) - y0_) / (y1_ - y0_) * (kH - kTop - kBottom);
  }
  bool usable_x(double v) const { return std::isfinite(v) && (!log_x_ || v > 0); }
  bool usable_y(double v) const { return std::isfinite(v) && (!log_y_ || v > 0); }
  void fit_ranges() const;
  std::vector<double> ticks(double lo, double hi, bool log) const;

  std::string title_, xlabel_, ylabel_;
  bool log_x_ = false, log_y_ = false;
  std::vector<Series> series_;
  std::vector<Rule> hlines_, vlines_;
  mutable double x0_ = 0, x1_ = 1, y0_ = 0, y1_ = 1;
};

void Chart::fit_ranges() const {
  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  for (const Series& s : series_) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!usable_x(s.x[i]) || !usable_y(s.y[i])) continue;
      xlo = std::min(xlo, tx(s.x[i]));
      xhi = std::max(xhi, tx(s.x[i]));
      ylo = std::min(ylo, ty(s.y[i]));
      yhi = std::max(yhi, ty(s.y[i]));
    }
  }
  for (const Rule& r : hlines_) {
    if (usable_y(r.at)) {
      ylo = std::min(ylo, ty(r.at));
      yhi = std::max(yhi, ty(r.at));
    }
  }
  for (const Rule& r : vlines_) {
    if (usable_x(r.at)) {
      xlo = std::min(xlo, tx(r.at));
      xhi = std::max(xhi, tx(r.at));
    }
  }
  if (!std::isfinite(xlo)) { xlo = 0; xhi = 1; }
  if (!std::isfinite(ylo)) { ylo = log_y_ ? -1 : 0; yhi = log_y_ ? 0 : 1; }
  if (!log_y_) ylo = std::min(ylo, 0.0);
  if (xhi - xlo < 1e-12) { xlo -= 0.5; xhi += 0.5; }
  if (yhi - ylo < 1e-12) { ylo -= 0.5; yhi += 0.5; }
  const double ypad = 0.05 * (yhi - ylo);
  x0_ = xlo;
  x1_ = xhi;
  y0_ = log_y_ ? ylo - ypad : ylo;
  y1_ = yhi + ypad;
}

std::vector<double> Chart::ticks(double lo, double hi, bool log) const {
  std::vector<double> out;
  if (log) {
    const int step = std::max(1, static_cast<int>(std::ceil((hi - lo) / 8)));
    for (int e = static_cast<int>(std::ceil(lo)); e <= hi; e += step) {
      out.push_back(std::pow(10.0, e));
    }
    return out;
  }
  const double raw = (hi - lo) / 5;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    if (f * mag >= raw) { step = f * mag; break; }
  }
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) {
    out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return out;
}

std::string Chart::render() const {
  fit_ranges();
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
    << "\" height=\"" << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" "
       "font-size=\"15\">" << escape(title_) << "</text>\n";
  const double bx0 = kLeft, bx1 = kW - kRight, by0 = kTop, by1 = kH - kBottom;
  for (double v : ticks(x0_, x1_, log_x_)) {
    const double x = px(v);
    o << "<line x1=\"" << num(x) << "\" y1=\"" << by0 << "\" x2=\"" << num(x)
      << "\" y2=\"" << by1 << "\" stroke=\"#eee\"/>\n";
    o << "<text x=\"" << num(x) << "\" y=\"" << by1 + 16
      << "\" text-anchor=\"middle\">" << num(v) << "</text>\n";
  }
  for (double v : ticks(y0_, y1_, log_y_)) {
    const double y = py(v);
    o << "<line x1=\"" << bx0 << "\" y1=\"" << num(y) << "\" x2=\"" << bx1
      << "\" y2=\"" << num(y) << "\" stroke=\"#eee\"/>\n";
    o << "<text x=\"" << bx0 - 6 << "\" y=\"" << num(y + 4)
      << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
  }
  o << "<rect x=\"" << bx0 << "\" y=\"" << by0 << "\" width=\"" << bx1 - bx0
    << "\" height=\"" << by1 - by0 << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << (bx0 + bx1) / 2 << "\" y=\"" << kH - 12
    << "\" text-anchor=\"middle\">" << escape(xlabel_) << "</text>\n";
  o << "<text transform=\"translate(16," << (by0 + by1) / 2
    << ") rotate(-90)\" text-anchor=\"middle\">" << escape(ylabel_)
    << "</text>\n";
  for (const Rule& r : hlines_) {
    if (!usable_y(r.at)) continue;
    const double y = py(r.at);
    o << "<line x1=\"" << bx0 << "\" y1=\"" << num(y) << "\" x2=\"" << bx1
      << "\" y2=\"" << num(y) << "\" stroke=\"" << r.color
      << "\" stroke-dasharray=\"6,4\"/>\n";
    o << "<text x=\"" << bx1 - 4 << "\" y=\"" << num(y - 4)
      << "\" text-anchor=\"end\" fill=\"" << r.color << "\">"
      << escape(r.label) << "</text>\n";
  }
  for (const Rule& r : vlines_) {
    if (!usable_x(r.at)) continue;
    const double x = px(r.at);
    o << "<line x1=\"" << num(x) << "\" y1=\"" << by0 << "\" x2=\"" << num(x)
      << "\" y2=\"" << by1 << "\" stroke=\"" << r.color
      << "\" stroke-dasharray=\"3,3\"/>\n";
    o << "<text x=\"" << num(x + 4) << "\" y=\"" << by0 + 14 << "\" fill=\""
      << r.color << "\">" << escape(r.label) << "</text>\n";
  }
  double legend_y = by0 + 14;
  for (const Series& s : series_) {
    std::string pts;
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!usable_x(s.x[i]) || !usable_y(s.y[i])) continue;
      pts += num(px(s.x[i])) + "," + num(py(s.y[i])) + " ";
    }
    o << "<polyline fill=\"none\" stroke=\"" << s.color
      << "\" stroke-width=\"2\"";
    if (!s.dash.empty()) o << " stroke-dasharray=\"" << s.dash << "\"";
    o << " points=\"" << pts << "\"/>\n";
    if (s.markers) {
      for (size_t i = 0; i < s.x.size(); ++i) {
        if (!usable_x(s.x[i]) || !usable_y(s.y[i])) continue;
        o << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
          << "\" r=\"4\" fill=\"" << s.color << "\"/>\n";
      }
    }
    if (!s.label.empty()) {
      o << "<text x=\"" << bx1 - 8 << "\" y=\"" << num(legend_y + 14)
        << "\" text-anchor=\"end\" fill=\"" << s.color << "\">"
        << escape(s.label) << "</text>\n";
      legend_y += 16;
    }
  }
  o << "</svg>\n";
  return o.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void require_files(const fs::path& dir, const std::vector<std::string>& names) {
  std::string missing;
  for (const auto& n : names) {
    if (!fs::exists(dir / n)) missing += (missing.empty() ? "" : ", ") + n;
  }
  if (!missing.empty()) {
    throw InvalidInput(dir.string() + " is missing " + missing);
  }
}

// Diverging blue-white-red scale on [-1, 1].
std::string color_of(double v) {
  v = std::clamp(v, -1.0, 1.0);
  const int fade = static_cast<int>(std::lround(255 * (1 - std::abs(v))));
  char buf[8];
  if (v >= 0) std::snprintf(buf, sizeof buf, "#ff%02x%02x", fade, fade);
  else std::snprintf(buf, sizeof buf, "#%02x%02xff", fade, fade);
  return buf;
}

std::string heatmap(const std::vector<double>& u, int d, double vmax,
                    const std::string& title) {
  const double cell = std::min(60.0, 360.0 / (d + 1));
  const double w = 40 + cell * (d + 1) + 20, h = 60 + cell * d + 20;
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w)
    << "\" height=\"" << num(h) << "\" font-family=\"sans-serif\" "
       "font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(w / 2) << "\" y=\"20\" text-anchor=\"middle\">"
    << escape(title) << "</text>\n";
  o << "<text x=\"" << num(40 + cell * d / 2) << "\" y=\"44\" "
       "text-anchor=\"middle\">w</text><text x=\"" << num(40 + cell * (d + 0.5))
    << "\" y=\"44\" text-anchor=\"middle\">b</text>\n";
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c <= d; ++c) {
      const double v = c < d ? u[r * d + c] : u[d * d + r];
      o << "<rect x=\"" << num(40 + c * cell) << "\" y=\"" << num(50 + r * cell)
        << "\" width=\"" << num(cell) << "\" height=\"" << num(cell)
        << "\" fill=\"" << color_of(vmax > 0 ? v / vmax : 0.0)
        << "\" stroke=\"#999\"><title>" << num(v) << "</title></rect>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace

std::vector<std::string> plot_run(const fs::path& dir) {
  require_files(dir, {"metrics.csv", "report.json", "config.json"});
  const Table m = read_table(dir / "metrics.csv");
  const json report = read_json_file(dir / "report.json");
  const json config = read_json_file(dir / "config.json");
  const double M = report.at("M").get<double>();
  const double Tstar = report.at("Tstar").get<double>();
  const std::vector<double>& t = m.at("t");
  const std::vector<double>& E = m.at("E");
  const std::vector<double>& u = m.at("u_l1");
  std::vector<std::string> written;

  Series prof;
  prof.label = "|u(t)|_1";
  for (size_t k = 0; k + 1 < t.size(); ++k) {
    prof.x.insert(prof.x.end(), {t[k], t[k + 1]});
    prof.y.insert(prof.y.end(), {u[k], u[k]});
  }
  write_text(dir / "u_l1_vs_t.svg",
             Chart("control norm profile", "t", "|u(t)|_1")
                 .add(prof)
                 .hline(M, "#d62728", "M = " + num(M))
                 .vline(Tstar, "#2ca02c", "T* = " + num(Tstar))
                 .render());
  written.push_back("u_l1_vs_t.svg");

  Series err;
  err.x = t;
  err.y = E;
  err.markers = true;
  err.label = "E(x(t))";
  write_text(dir / "error_vs_t.svg", Chart("training error", "t", "E(x(t))")
                                         .log_y()
                                         .add(err)
                                         .vline(Tstar, "#2ca02c",
                                                "T* = " + num(Tstar))
                                         .render());
  written.push_back("error_vs_t.svg");

  const std::string form = config.at("dynamics").at("form").get<std::string>();
  if ((form == "inside" || form == "outside") && fs::exists(dir / "controls.csv")) {
    const Table c = read_table(dir / "controls.csv");
    const int d_u = static_cast<int>(c.size()) - 1;
    const int d = static_cast<int>(std::lround((-1 + std::sqrt(1.0 + 4 * d_u)) / 2));
    const int steps = static_cast<int>(c.at("t").size());
    const int idx = report.at("idx").get<int>();
    std::vector<int> picks = {0, idx - 1, idx};
    picks.erase(std::remove_if(picks.begin(), picks.end(),
                               [&](int k) { return k < 0 || k >= steps; }),
                picks.end());
    picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
    double vmax = 0.0;
    auto point = [&](int k) {
      std::vector<double> v(d_u);
      for (int j = 0; j < d_u; ++j) v[j] = c.at("u_" + std::to_string(j))[k];
      return v;
    };
    for (int k : picks) {
      for (double v : point(k)) vmax = std::max(vmax, std::abs(v));
    }
    for (int k : picks) {
      const std::string name = "w_heatmap_t" + std::to_string(k) + ".svg";
      write_text(dir / name, heatmap(point(k), d, vmax,
                                     "step " + std::to_string(k) + ", t = " +
                                         num(c.at("t")[k])));
      written.push_back(name);
    }
  }
  return written;
}

std::vector<std::string> plot_sweep(const fs::path& dir) {
  require_files(dir, {"sweep.csv", "bounds.json"});
  const Table s = read_table(dir / "sweep.csv");
  const json bounds = read_json_file(dir / "bounds.json");
  const std::string axis = bounds.at("axis").get<std::string>();
  std::vector<std::string> written;
  if (axis == "T") {
    Series pts;
    pts.x = s.at("T");
    pts.y = s.at("E_at_Tstar");
    pts.markers = true;
    pts.label = "E(x(T*))";
    Chart chart("error at T* against the horizon", "T", "E(x(T*))");
    chart.log_x().log_y().add(pts);
    if (!bounds.at("fit").is_null()) {
      // C (1/M + 1) / T with the fitted constant.
      const double C = bounds["fit"]["E_bound"]["C"].get<double>();
      const double M = s.at("M").front();
      Series ref;
      ref.color = "#ff7f0e";
      ref.dash = "6,4";
      ref.label = "C (1/M + 1) / T";
      for (double T : pts.x) {
        ref.x.push_back(T);
        ref.y.push_back(C * (1 / M + 1) / T);
      }
      chart.add(ref);
    }
    write_text(dir / "decay_vs_T.svg", chart.render());
    written.push_back("decay_vs_T.svg");
  } else {
    Series pts;
    pts.x = s.at("M");
    pts.y = s.at("Tstar");
    pts.markers = true;
    pts.label = "T*";
    Chart chart("stopping time against the constraint level", "M", "T*");
    chart.log_x().add(pts);
    if (!bounds.at("fit").is_null()) {
      const double C = bounds["fit"]["Tstar_bound"]["C"].get<double>();
      Series ref;
      ref.color = "#ff7f0e";
      ref.dash = "6,4";
      ref.label = "C (1/M + 1/M^2)";
      for (double M : pts.x) {
        ref.x.push_back(M);
        ref.y.push_back(C * (1 / M + 1 / (M * M)));
      }
      chart.add(ref);
    }
    write_text(dir / "tstar_vs_M.svg", chart.render());
    written.push_back("tstar_vs_M.svg");
  }
  return written;
}

std::vector<std::string> plot_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw InvalidInput(dir.string() + " is not a directory");
  }
  if (fs::exists(dir / "sweep.csv")) return plot_sweep(dir);
  return plot_run(dir);
}

}  // namespace sparsenode::tools
