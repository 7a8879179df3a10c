#pragma once

#include <string>
#include <vector>

#include "convexlse/types.hpp"

namespace convexlse {

// Minimal line-plot writer: axes with ticks, an optional shaded band, data
// polylines, vertical markers and a caption. Output is deterministic.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void set_log_log(bool log_x, bool log_y);
  void add_band(ConstSpan x, ConstSpan y_low, ConstSpan y_high);
  void add_line(ConstSpan x, ConstSpan y);
  void add_points(ConstSpan x, ConstSpan y);
  void add_vline(double x);
  void set_caption(std::string text);

  std::string render() const;

 private:
  struct Series {
    Vec x, y;
    bool points = false;
  };
  std::string title_, x_label_, y_label_, caption_;
  bool log_x_ = false, log_y_ = false;
  std::vector<Series> series_;
  Vec band_x_, band_lo_, band_hi_;
  Vec vlines_;
};

}  // namespace convexlse
