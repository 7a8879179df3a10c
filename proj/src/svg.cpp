#include "convexlse/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace convexlse {

namespace {

constexpr double kWidth = 800.0, kHeight = 560.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 60.0;

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  // snprintf honors the C locale set at startup; normalize just in case.
  for (char& c : buf)
    if (c == ',') c = '.';
  return buf;
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::set_log_log(bool log_x, bool log_y) {
  log_x_ = log_x;
  log_y_ = log_y;
}

void SvgPlot::add_band(ConstSpan x, ConstSpan y_low, ConstSpan y_high) {
  band_x_.assign(x.begin(), x.end());
  band_lo_.assign(y_low.begin(), y_low.end());
  band_hi_.assign(y_high.begin(), y_high.end());
}

void SvgPlot::add_line(ConstSpan x, ConstSpan y) {
  series_.push_back({Vec(x.begin(), x.end()), Vec(y.begin(), y.end()), false});
}

void SvgPlot::add_points(ConstSpan x, ConstSpan y) {
  series_.push_back({Vec(x.begin(), x.end()), Vec(y.begin(), y.end()), true});
}

void SvgPlot::add_vline(double x) { vlines_.push_back(x); }

void SvgPlot::set_caption(std::string text) { caption_ = std::move(text); }

std::string SvgPlot::render() const {
  const double inf = std::numeric_limits<double>::infinity();
  double x_min = inf, x_max = -inf, y_min = inf, y_max = -inf;
  auto tx = [&](double v) { return log_x_ ? std::log10(v) : v; };
  auto ty = [&](double v) { return log_y_ ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return false;
    if (log_x_ && x <= 0.0) return false;
    if (log_y_ && y <= 0.0) return false;
    return true;
  };
  auto grow = [&](ConstSpan xs, ConstSpan ys) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!usable(xs[i], ys[i])) continue;
      x_min = std::min(x_min, tx(xs[i]));
      x_max = std::max(x_max, tx(xs[i]));
      y_min = std::min(y_min, ty(ys[i]));
      y_max = std::max(y_max, ty(ys[i]));
    }
  };
  for (const Series& s : series_) grow(s.x, s.y);
  grow(band_x_, band_lo_);
  grow(band_x_, band_hi_);
  if (!(x_min < x_max)) {
    x_min -= 1.0;
    x_max += 1.0;
  }
  if (!(y_min < y_max)) {
    y_min -= 1.0;
    y_max += 1.0;
  }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  auto px = [&](double v) {
    return kLeft + (tx(v) - x_min) / (x_max - x_min) * (kWidth - kLeft - kRight);
  };
  auto py = [&](double v) {
    return kHeight - kBottom - (ty(v) - y_min) / (y_max - y_min) * (kHeight - kTop - kBottom);
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
         title_ + "</text>\n";

  // axes
  out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kHeight - kBottom) + "\" x2=\"" +
         num(kWidth - kRight) + "\" y2=\"" + num(kHeight - kBottom) +
         "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) +
         "\" y2=\"" + num(kHeight - kBottom) + "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double fx = x_min + (x_max - x_min) * k / 5.0;
    const double fy = y_min + (y_max - y_min) * k / 5.0;
    const double gx = kLeft + (kWidth - kLeft - kRight) * k / 5.0;
    const double gy = kHeight - kBottom - (kHeight - kTop - kBottom) * k / 5.0;
    const double label_x = log_x_ ? std::pow(10.0, fx) : fx;
    const double label_y = log_y_ ? std::pow(10.0, fy) : fy;
    out += "<line x1=\"" + num(gx) + "\" y1=\"" + num(kHeight - kBottom) + "\" x2=\"" + num(gx) +
           "\" y2=\"" + num(kHeight - kBottom + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(gx) + "\" y=\"" + num(kHeight - kBottom + 20) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + num(label_x) + "</text>\n";
    out += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(gy) + "\" x2=\"" + num(kLeft) +
           "\" y2=\"" + num(gy) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(gy + 4) +
           "\" text-anchor=\"end\" font-size=\"11\">" + num(label_y) + "</text>\n";
  }
  out += "<text x=\"" + num((kLeft + kWidth - kRight) / 2) + "\" y=\"" + num(kHeight - 16) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + x_label_ + "</text>\n";
  out += "<text x=\"18\" y=\"" + num((kTop + kHeight - kBottom) / 2) +
         "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " +
         num((kTop + kHeight - kBottom) / 2) + ")\">" + y_label_ + "</text>\n";

  if (!band_x_.empty()) {
    std::string pts;
    for (std::size_t i = 0; i < band_x_.size(); ++i) {
      if (!usable(band_x_[i], band_hi_[i])) continue;
      pts += num(px(band_x_[i])) + "," + num(py(band_hi_[i])) + " ";
    }
    for (std::size_t i = band_x_.size(); i-- > 0;) {
      if (!usable(band_x_[i], band_lo_[i])) continue;
      pts += num(px(band_x_[i])) + "," + num(py(band_lo_[i])) + " ";
    }
    out += "<polygon points=\"" + pts + "\" fill=\"#a0c4ff\" fill-opacity=\"0.45\" "
           "stroke=\"none\"/>\n";
  }

  const char* colors[] = {"#1f4e9c", "#c23b22", "#2e7d32", "#6a2c91"};
  int ci = 0;
  for (const Series& s : series_) {
    const char* color = colors[ci++ % 4];
    if (s.points) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!usable(s.x[i], s.y[i])) continue;
        out += "<circle cx=\"" + num(px(s.x[i])) + "\" cy=\"" + num(py(s.y[i])) +
               "\" r=\"3\" fill=\"" + color + "\"/>\n";
      }
    } else {
      std::string pts;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!usable(s.x[i], s.y[i])) continue;
        pts += num(px(s.x[i])) + "," + num(py(s.y[i])) + " ";
      }
      out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"1.5\"/>\n";
    }
  }

  for (double v : vlines_) {
    if (log_x_ && v <= 0.0) continue;
    out += "<line x1=\"" + num(px(v)) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(px(v)) +
           "\" y2=\"" + num(kHeight - kBottom) +
           "\" stroke=\"#c23b22\" stroke-dasharray=\"4 3\"/>\n";
  }

  if (!caption_.empty())
    out += "<text x=\"" + num(kWidth - kRight) + "\" y=\"" + num(kTop - 6) +
           "\" text-anchor=\"end\" font-size=\"12\">" + caption_ + "</text>\n";

  out += "</svg>\n";
  return out;
}

}  // namespace convexlse
