#include "regret/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace regret::svg {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

const char* color(std::size_t i) { return kPalette[i % (sizeof kPalette / sizeof *kPalette)]; }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool empty() const { return !(lo <= hi); }
  void widen_degenerate(double min_span) {
    if (empty()) { lo = 0.0; hi = 1.0; }
    if (hi - lo < min_span) {
      const double c = 0.5 * (lo + hi);
      lo = c - 0.5 * min_span;
      hi = c + 0.5 * min_span;
    }
  }
};

void header(std::ostringstream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
     << "\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"16\">" << escape(title) << "</text>\n";
}

void frame(std::ostringstream& os) {
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
     << "\" height=\"" << kHeight - kTop - kBottom
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
}

void legend(std::ostringstream& os, const std::vector<std::string>& names) {
  const double x = kWidth - kRight + 15.0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double y = kTop + 15.0 + 20.0 * static_cast<double>(i);
    os << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x + 20) << "\" y2=\""
       << num(y) << "\" stroke=\"" << color(i) << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << num(x + 26) << "\" y=\"" << num(y + 4)
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(names[i]) << "</text>\n";
  }
}

void axis_labels(std::ostringstream& os, const std::string& xl, const std::string& yl) {
  const double cx = kLeft + 0.5 * (kWidth - kLeft - kRight);
  const double cy = kTop + 0.5 * (kHeight - kTop - kBottom);
  os << "<text x=\"" << num(cx) << "\" y=\"" << num(kHeight - 15)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(xl)
     << "</text>\n";
  os << "<text x=\"20\" y=\"" << num(cy) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
     << "font-size=\"13\" transform=\"rotate(-90 20 " << num(cy) << ")\">" << escape(yl)
     << "</text>\n";
}

struct Mapping {
  Range x, y;
  double px(double v) const { return kLeft + (v - x.lo) / (x.hi - x.lo) * (kWidth - kLeft - kRight); }
  double py(double v) const {
    return kHeight - kBottom - (v - y.lo) / (y.hi - y.lo) * (kHeight - kTop - kBottom);
  }
};

void ticks(std::ostringstream& os, const Mapping& m, bool log_y) {
  for (int i = 0; i <= 4; ++i) {
    const double v = m.x.lo + (m.x.hi - m.x.lo) * i / 4.0;
    os << "<text x=\"" << num(m.px(v)) << "\" y=\"" << num(kHeight - kBottom + 16)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << tick(v)
       << "</text>\n";
  }
  if (log_y) {
    const int lo = static_cast<int>(std::ceil(m.y.lo));
    const int hi = static_cast<int>(std::floor(m.y.hi));
    const int stride = std::max(1, (hi - lo) / 8 + 1);
    for (int e = lo; e <= hi; e += stride) {
      os << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(m.py(e) + 4)
         << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << e
         << "</text>\n";
    }
  } else {
    for (int i = 0; i <= 4; ++i) {
      const double v = m.y.lo + (m.y.hi - m.y.lo) * i / 4.0;
      os << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(m.py(v) + 4)
         << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick(v)
         << "</text>\n";
    }
  }
}

}  // namespace

std::string line_chart(const std::vector<Series>& series, const ChartOptions& opts) {
  auto ymap = [&](double v) { return opts.log_y ? std::log10(v) : v; };
  auto keep = [&](double v) { return std::isfinite(v) && (!opts.log_y || v > 0.0); };

  Mapping m;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("line_chart: x/y size mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!keep(s.y[i]) || !std::isfinite(s.x[i])) continue;
      m.x.add(s.x[i]);
      m.y.add(ymap(s.y[i]));
    }
  }
  m.x.widen_degenerate(1.0);
  m.y.widen_degenerate(opts.log_y ? 1.0 : 1e-12 + 1e-6 * std::abs(m.y.lo));

  std::ostringstream os;
  header(os, opts.title);
  frame(os);
  ticks(os, m, opts.log_y);
  axis_labels(os, opts.x_label, opts.y_label + (opts.log_y ? " (log10)" : ""));
  std::vector<std::string> names;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    names.push_back(s.name);
    os << "<polyline fill=\"none\" stroke=\"" << color(k) << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!keep(s.y[i]) || !std::isfinite(s.x[i])) continue;
      if (!first) os << ' ';
      os << num(m.px(s.x[i])) << ',' << num(m.py(ymap(s.y[i])));
      first = false;
    }
    os << "\"/>\n";
  }
  legend(os, names);
  os << "</svg>\n";
  return os.str();
}

std::string path_overlay(const Objective& f, const std::vector<PathSeries>& paths,
                         const std::string& title) {
  if (f.dim() != 2) throw std::invalid_argument("path_overlay: objective must be 2-D");
  Mapping m;
  for (const auto& p : paths) {
    for (const auto& x : p.path.points()) {
      if (!x.allFinite()) continue;
      m.x.add(x[0]);
      m.y.add(x[1]);
    }
  }
  if (const auto opt = f.optimum()) {
    m.x.add((*opt)[0]);
    m.y.add((*opt)[1]);
  }
  m.x.widen_degenerate(1e-3);
  m.y.widen_degenerate(1e-3);
  const double padx = 0.1 * (m.x.hi - m.x.lo);
  const double pady = 0.1 * (m.y.hi - m.y.lo);
  m.x.lo -= padx; m.x.hi += padx;
  m.y.lo -= pady; m.y.hi += pady;

  constexpr int n = 200;
  std::vector<double> grid(static_cast<std::size_t>(n * n));
  auto at = [&](int i, int j) -> double& { return grid[static_cast<std::size_t>(j * n + i)]; };
  auto gx = [&](int i) { return m.x.lo + (m.x.hi - m.x.lo) * i / (n - 1.0); };
  auto gy = [&](int j) { return m.y.lo + (m.y.hi - m.y.lo) * j / (n - 1.0); };
  Range fr;
  Vector p(2);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      p << gx(i), gy(j);
      at(i, j) = f.value(p);
      fr.add(at(i, j));
    }
  }

  std::ostringstream os;
  header(os, title);
  frame(os);
  ticks(os, m, false);
  axis_labels(os, "x_0", "x_1");

  if (!fr.empty() && fr.hi > fr.lo) {
    const double span = fr.hi - fr.lo;
    const double base = span * 1e-4;
    constexpr int kLevels = 12;
    os << "<g fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"0.8\">\n";
    for (int k = 0; k < kLevels; ++k) {
      const double level = fr.lo + base * std::pow(span / base, (k + 0.5) / kLevels);
      os << "<path d=\"";
      for (int j = 0; j + 1 < n; ++j) {
        for (int i = 0; i + 1 < n; ++i) {
          // Corners counter-clockwise from (i, j).
          const double v[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
          const double cx[4] = {gx(i), gx(i + 1), gx(i + 1), gx(i)};
          const double cy[4] = {gy(j), gy(j), gy(j + 1), gy(j + 1)};
          int code = 0;
          for (int c = 0; c < 4; ++c) {
            if (!std::isfinite(v[c])) { code = -1; break; }
            if (v[c] > level) code |= 1 << c;
          }
          if (code <= 0 || code == 15) continue;
          // Crossing points on each of the four edges that straddle the level.
          double ex[4], ey[4];
          int nc = 0;
          for (int e = 0; e < 4; ++e) {
            const int a = e, b = (e + 1) % 4;
            if (((code >> a) & 1) == ((code >> b) & 1)) continue;
            const double s = (level - v[a]) / (v[b] - v[a]);
            ex[nc] = cx[a] + s * (cx[b] - cx[a]);
            ey[nc] = cy[a] + s * (cy[b] - cy[a]);
            ++nc;
          }
          if (nc == 4) {
            // Saddle: pair edges by the sign of the cell centre.
            const double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
            const bool centre_high = centre > level;
            const bool corner0_high = code & 1;
            if (centre_high == corner0_high) {
              std::swap(ex[1], ex[3]);
              std::swap(ey[1], ey[3]);
            }
            os << 'M' << num(m.px(ex[0])) << ' ' << num(m.py(ey[0])) << 'L' << num(m.px(ex[3]))
               << ' ' << num(m.py(ey[3])) << 'M' << num(m.px(ex[1])) << ' ' << num(m.py(ey[1]))
               << 'L' << num(m.px(ex[2])) << ' ' << num(m.py(ey[2]));
          } else if (nc == 2) {
            os << 'M' << num(m.px(ex[0])) << ' ' << num(m.py(ey[0])) << 'L' << num(m.px(ex[1]))
               << ' ' << num(m.py(ey[1]));
          }
        }
      }
      os << "\"/>\n";
    }
    os << "</g>\n";
  }

  std::vector<std::string> names;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    names.push_back(paths[k].name);
    os << "<polyline fill=\"none\" stroke=\"" << color(k) << "\" stroke-width=\"1.2\" points=\"";
    bool first = true;
    for (const auto& x : paths[k].path.points()) {
      if (!x.allFinite()) continue;
      if (!first) os << ' ';
      os << num(m.px(x[0])) << ',' << num(m.py(x[1]));
      first = false;
    }
    os << "\"/>\n";
  }
  if (const auto opt = f.optimum()) {
    os << "<circle cx=\"" << num(m.px((*opt)[0])) << "\" cy=\"" << num(m.py((*opt)[1]))
       << "\" r=\"4\" fill=\"black\"/>\n";
  }
  legend(os, names);
  os << "</svg>\n";
  return os.str();
}

}  // namespace regret::svg
