#pragma once
// Deterministic SVG scatter rendering of zero sets on and around the unit
// circle, with the distinguished circle parameters overlaid in red.

#include <cstdio>
#include <string>
#include <vector>

#include "critical_params.hpp"
#include "zero_atlas.hpp"

namespace isingzero {

namespace detail {
inline std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}
} // namespace detail

// One marker per record; multiplicity is carried in the data-mult attribute
// so marker inventories can be audited from the file alone. Output is
// byte-deterministic for a fixed input.
inline std::string render_figure(const std::vector<ZeroSet> &sets,
                                 const std::vector<double> &red_angles,
                                 const std::string &title = "") {
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.3 -1.3 2.6 "
       "2.6\" width=\"780\" height=\"780\">\n";
  if (!title.empty()) s += "<!-- " + title + " -->\n";
  s += "<rect x=\"-1.3\" y=\"-1.3\" width=\"2.6\" height=\"2.6\" "
       "fill=\"white\"/>\n";
  s += "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#cccccc\" "
       "stroke-width=\"0.004\"/>\n";
  for (const auto &set : sets) {
    for (const auto &rec : set.records) {
      // SVG's y axis points down; flip so the upper half plane is on top
      std::string cx = detail::fmt6(rec.lambda.re);
      std::string cy = detail::fmt6(-rec.lambda.im);
      if (rec.on_circle) {
        s += "<circle cx=\"" + cx + "\" cy=\"" + cy +
             "\" r=\"0.006\" fill=\"#1f5fbf\" data-mult=\"" +
             std::to_string(rec.multiplicity) + "\" data-depth=\"" +
             std::to_string(rec.depth) + "\" data-kind=\"on\"/>\n";
      } else {
        s += "<circle cx=\"" + cx + "\" cy=\"" + cy +
             "\" r=\"0.008\" fill=\"#555555\" data-mult=\"" +
             std::to_string(rec.multiplicity) + "\" data-depth=\"" +
             std::to_string(rec.depth) + "\" data-kind=\"off\"/>\n";
      }
    }
  }
  for (double a : red_angles) {
    for (double sign : {1.0, -1.0}) {
      s += "<circle cx=\"" + detail::fmt6(std::cos(a)) + "\" cy=\"" +
           detail::fmt6(-sign * std::sin(a)) +
           "\" r=\"0.018\" fill=\"red\" data-kind=\"param\"/>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

} // namespace isingzero
