#include "skilldisc/cli/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace skilldisc::cli {

namespace {

std::string num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

const std::vector<std::string>& default_palette() {
  static const std::vector<std::string> p = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                             "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return p;
}

std::string render_trajectories(const maze::MazeSpec& spec,
                                const std::vector<std::vector<maze::Trajectory>>& by_skill, const SvgStyle& style) {
  if (style.palette.empty()) throw Error("svg palette is empty");
  const double s = style.scale, m = style.margin;
  const auto px = [&](double x) { return num(m + s * x); };
  const auto check = [&](const Vector2& p) {
    if (!(p.x() >= 0.0 && p.x() <= spec.width && p.y() >= 0.0 && p.y() <= spec.height))
      throw Error("trajectory point (" + num(p.x()) + ", " + num(p.y()) + ") lies outside the maze");
  };

  std::ostringstream o;
  const std::string w = num(2 * m + s * spec.width), h = num(2 * m + s * spec.height);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
    << " " << h << "\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"#ffffff\"/>\n";
  o << "<g id=\"blocked\" fill=\"#d9d9d9\" stroke=\"none\">\n";
  for (int r = 0; r < spec.height; ++r)
    for (int c = 0; c < spec.width; ++c)
      if (spec.is_blocked(c, r))
        o << "<rect x=\"" << px(c) << "\" y=\"" << px(r) << "\" width=\"" << num(s) << "\" height=\"" << num(s)
          << "\"/>\n";
  o << "</g>\n";
  o << "<g id=\"walls\" stroke=\"#000000\" stroke-width=\"2\" stroke-linecap=\"square\">\n";
  o << "<rect x=\"" << px(0) << "\" y=\"" << px(0) << "\" width=\"" << num(s * spec.width) << "\" height=\""
    << num(s * spec.height) << "\" fill=\"none\"/>\n";
  for (const auto& wall : spec.walls) {
    const double x2 = wall.vertical ? wall.x : wall.x + 1;
    const double y2 = wall.vertical ? wall.y + 1 : wall.y;
    o << "<line x1=\"" << px(wall.x) << "\" y1=\"" << px(wall.y) << "\" x2=\"" << px(x2) << "\" y2=\"" << px(y2)
      << "\"/>\n";
  }
  o << "</g>\n";
  for (std::size_t z = 0; z < by_skill.size(); ++z) {
    const std::string& color = style.palette[z % style.palette.size()];
    o << "<g id=\"skill-" << z << "\" stroke=\"" << color << "\" fill=\"none\" stroke-width=\"1.5\" "
      << "stroke-opacity=\"0.8\">\n";
    for (const auto& traj : by_skill[z]) {
      if (traj.empty()) continue;
      o << "<polyline points=\"";
      check(traj.front().state);
      o << px(traj.front().state.x()) << "," << px(traj.front().state.y());
      for (const auto& tr : traj) {
        check(tr.next_state);
        o << " " << px(tr.next_state.x()) << "," << px(tr.next_state.y());
      }
      o << "\"/>\n";
    }
    o << "</g>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string render_line_plot(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& title,
                             const std::string& x_label, const std::string& y_label) {
  if (xs.size() != ys.size() || xs.empty()) throw Error("line plot needs equally many x and y values");
  const double W = 480, H = 320, L = 70, R = 20, T = 40, B = 50;
  double x0 = *std::min_element(xs.begin(), xs.end()), x1 = *std::max_element(xs.begin(), xs.end());
  double y0 = *std::min_element(ys.begin(), ys.end()), y1 = *std::max_element(ys.begin(), ys.end());
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const auto mx = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  const auto my = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(W) << "\" height=\"" << num(H) << "\" viewBox=\"0 0 "
    << num(W) << " " << num(H) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << num(W) << "\" height=\"" << num(H) << "\" fill=\"#ffffff\"/>\n";
  o << "<text x=\"" << num(W / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" << escape(title)
    << "</text>\n";
  o << "<g stroke=\"#000000\">\n";
  o << "<line x1=\"" << num(L) << "\" y1=\"" << num(H - B) << "\" x2=\"" << num(W - R) << "\" y2=\"" << num(H - B)
    << "\"/>\n";
  o << "<line x1=\"" << num(L) << "\" y1=\"" << num(T) << "\" x2=\"" << num(L) << "\" y2=\"" << num(H - B) << "\"/>\n";
  o << "</g>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
    o << "<text x=\"" << num(mx(xv)) << "\" y=\"" << num(H - B + 16) << "\" text-anchor=\"middle\">" << num(xv)
      << "</text>\n";
    o << "<text x=\"" << num(L - 6) << "\" y=\"" << num(my(yv) + 4) << "\" text-anchor=\"end\">" << num(yv)
      << "</text>\n";
  }
  o << "<text x=\"" << num((L + W - R) / 2) << "\" y=\"" << num(H - 12) << "\" text-anchor=\"middle\">"
    << escape(x_label) << "</text>\n";
  o << "<text x=\"16\" y=\"" << num((T + H - B) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << num((T + H - B) / 2) << ")\">" << escape(y_label) << "</text>\n";
  o << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) o << (i ? " " : "") << num(mx(xs[i])) << "," << num(my(ys[i]));
  o << "\"/>\n";
  o << "<g fill=\"#1f77b4\">\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    o << "<circle cx=\"" << num(mx(xs[i])) << "\" cy=\"" << num(my(ys[i])) << "\" r=\"3\"/>\n";
  o << "</g>\n</svg>\n";
  return o.str();
}

}  // namespace skilldisc::cli
