#include "turtleglyph/render.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

namespace turtleglyph {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

// Sectors narrower than half a degree get a legend row instead of a label.
const Prob kLabelSpanFloor(1, 720);

struct Frame {
  double cx, cy, r;
};

Frame disk_frame(const Style& style, double radius_scale) {
  double half = style.canvas_size / 2.0;
  return Frame{half, half, 0.42 * style.canvas_size * radius_scale};
}

double stroke_width_for_depth(const Style& style, int depth) {
  if (style.stroke_width_by_depth.empty()) return 1.0;
  std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(std::max(depth, 0)),
                                        style.stroke_width_by_depth.size() - 1);
  return style.stroke_width_by_depth[i];
}

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

bool region_label_concatenated(const Style& style, const TurtlebackLayout& layout) {
  if (style.label_mode == LabelMode::kConcatenated) return true;
  if (style.label_mode == LabelMode::kSlashSeparated) return false;
  for (const RegionGeometry& region : layout.regions) {
    for (const EventName& name : region.node_path) {
      bool short_name = name.size() == 1 ? name[0] != '~'
                                         : (name.size() == 2 && name[0] == '~');
      if (!short_name) return false;
    }
  }
  return true;
}

const std::string& palette_color(const Style& style, std::size_t index) {
  static const std::string fallback = "#999999";
  if (style.palette.empty()) return fallback;
  return style.palette[index % style.palette.size()];
}

struct SvgBuilder {
  std::string body;

  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width) {
    body += "<line x1=\"" + format_double(x1) + "\" y1=\"" + format_double(y1) +
            "\" x2=\"" + format_double(x2) + "\" y2=\"" + format_double(y2) +
            "\" stroke=\"" + stroke + "\" stroke-width=\"" + format_double(width) +
            "\" stroke-linecap=\"round\"/>\n";
  }

  void circle(double cx, double cy, double r, const std::string& fill,
              const std::string& stroke, double width) {
    body += "<circle cx=\"" + format_double(cx) + "\" cy=\"" + format_double(cy) +
            "\" r=\"" + format_double(r) + "\" fill=\"" + fill + "\"";
    if (!stroke.empty())
      body += " stroke=\"" + stroke + "\" stroke-width=\"" + format_double(width) + "\"";
    body += "/>\n";
  }

  void path(const std::string& d, const std::string& fill) {
    body += "<path d=\"" + d + "\" fill=\"" + fill + "\" stroke=\"none\"/>\n";
  }

  void text(double x, double y, double size, const std::string& content,
            const std::string& anchor = "middle") {
    body += "<text x=\"" + format_double(x) + "\" y=\"" + format_double(y) +
            "\" font-family=\"sans-serif\" font-size=\"" + format_double(size) +
            "\" text-anchor=\"" + anchor + "\" fill=\"#1a1a1a\">" + xml_escape(content) +
            "</text>\n";
  }

  std::string finish(int canvas) const {
    std::string size = std::to_string(canvas);
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           size + "\" height=\"" + size + "\" viewBox=\"0 0 " + size + " " + size +
           "\">\n" + body + "</svg>\n";
  }
};

struct LegendEntry {
  std::string text;
};

void emit_legend(SvgBuilder& svg, const Style& style, const std::vector<LegendEntry>& rows) {
  if (rows.empty()) return;
  double size = style.font_size * 0.75;
  double line_height = size * 1.3;
  double y = style.canvas_size - 8.0 - line_height * static_cast<double>(rows.size() - 1);
  for (const LegendEntry& row : rows) {
    svg.text(8.0, y, size, row.text, "start");
    y += line_height;
  }
}

void check_style(const Style& style) {
  if (style.canvas_size < 100) throw DomainError("canvas_size must be at least 100");
  if (style.palette.empty()) throw DomainError("palette must not be empty");
}

double estimated_text_width(const Style& style, const std::string& text) {
  return 0.6 * style.font_size * static_cast<double>(text.size());
}

bool is_leaf_region(const TurtlebackLayout& layout, std::size_t i) {
  return i + 1 == layout.regions.size() ||
         layout.regions[i + 1].depth <= layout.regions[i].depth;
}

}  // namespace

std::string format_double(double value) {
  if (value == 0.0) value = 0.0;  // normalize -0
  char buffer[64];
  auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

std::string render_turtleback(const TurtlebackLayout& layout, const Style& style,
                              std::vector<std::string>* warnings) {
  check_style(style);
  Frame frame = disk_frame(style, layout.radius);
  bool concatenated = region_label_concatenated(style, layout);

  SvgBuilder svg;
  std::vector<LegendEntry> legend;

  auto point_at = [&](double fraction_turn, double radius) {
    double theta = kTau * fraction_turn;
    return Point{frame.cx + radius * std::cos(theta), frame.cy - radius * std::sin(theta)};
  };

  // Leaf sector fills, in leaf order.
  std::size_t leaf_ordinal = 0;
  for (std::size_t i = 0; i < layout.regions.size(); ++i) {
    const RegionGeometry& region = layout.regions[i];
    if (region.depth == 0 && layout.regions.size() > 1) continue;
    if (!is_leaf_region(layout, i)) continue;

    const std::string& fill = palette_color(style, leaf_ordinal);
    ++leaf_ordinal;
    if (region.angle_span.is_zero()) continue;
    if (region.angle_span.is_one()) {
      svg.circle(frame.cx, frame.cy, frame.r, fill, "", 0.0);
      continue;
    }
    Prob end = region.angle_start + region.angle_span;
    Point p0 = point_at(region.angle_start.to_double(), frame.r);
    Point p1 = point_at(end.to_double(), frame.r);
    int large_arc = region.angle_span > Prob(1, 2) ? 1 : 0;
    std::string d = "M " + format_double(frame.cx) + " " + format_double(frame.cy) +
                    " L " + format_double(p0.x) + " " + format_double(p0.y) + " A " +
                    format_double(frame.r) + " " + format_double(frame.r) + " 0 " +
                    std::to_string(large_arc) + " 0 " + format_double(p1.x) + " " +
                    format_double(p1.y) + " Z";
    svg.path(d, fill);
  }

  // Boundary strokes: outer rim, then radial separators per depth.
  svg.circle(frame.cx, frame.cy, frame.r, "none", "#1a1a1a",
             stroke_width_for_depth(style, 0));
  for (std::size_t i = 0; i < layout.regions.size(); ++i) {
    const RegionGeometry& region = layout.regions[i];
    if (region.depth == 0) continue;
    bool first_sibling =
        i > 0 && layout.regions[i - 1].depth < region.depth;  // parent right before it
    // Every region draws its start boundary except the first sibling of a
    // non-root parent, whose start edge was already drawn by an ancestor.
    bool draw = region.depth == 1 || !first_sibling;
    if (!draw) continue;
    Point rim = point_at(region.angle_start.to_double(), frame.r);
    svg.line(frame.cx, frame.cy, rim.x, rim.y, "#1a1a1a",
             stroke_width_for_depth(style, region.depth));
  }

  // Leaf labels at the sector mid-angle, 2/3 of the radius out.
  for (std::size_t i = 0; i < layout.regions.size(); ++i) {
    const RegionGeometry& region = layout.regions[i];
    if (region.depth == 0 && layout.regions.size() > 1) continue;
    if (!is_leaf_region(layout, i)) continue;

    std::string text = format_label(region.node_path, concatenated) + " " +
                       region.angle_span.percent_str(4);
    if (region.angle_span < kLabelSpanFloor) {
      if (!region.angle_span.is_zero()) legend.push_back(LegendEntry{text});
      continue;
    }
    double mid = region.angle_span.is_one()
                     ? 0.0
                     : (region.angle_start + region.angle_span * Prob(1, 2)).to_double();
    Point at = point_at(mid, frame.r * 2.0 / 3.0);
    double chord = 2.0 * (frame.r * 2.0 / 3.0) *
                   std::sin(std::min(std::numbers::pi * region.angle_span.to_double(),
                                     std::numbers::pi / 2.0));
    if (warnings && estimated_text_width(style, text) > chord && !region.angle_span.is_one())
      warnings->push_back("canvas too small: label '" + text +
                          "' is wider than its sector");
    svg.text(at.x, at.y + style.font_size * 0.35, style.font_size, text);
  }

  emit_legend(svg, style, legend);
  return svg.finish(style.canvas_size);
}

std::string render_turtleback_chord(const TurtlebackLayout& layout, const Style& style,
                                    std::vector<std::string>* warnings) {
  check_style(style);
  std::size_t root_children = 0;
  for (const RegionGeometry& region : layout.regions)
    if (region.depth == 1) ++root_children;
  if (root_children != 2)
    throw DomainError("chord mode requires a model whose root has exactly two children");

  Frame frame = disk_frame(style, layout.radius);
  bool concatenated = region_label_concatenated(style, layout);

  // Collect leaves in order with cumulative masses; every boundary between
  // adjacent leaves becomes one chord of the disk placed by the solver.
  struct Slab {
    const RegionGeometry* region;
    Prob from, to;
  };
  std::vector<Slab> slabs;
  for (std::size_t i = 0; i < layout.regions.size(); ++i) {
    const RegionGeometry& region = layout.regions[i];
    if (region.depth == 0 || !is_leaf_region(layout, i)) continue;
    slabs.push_back(Slab{&region, region.angle_start, region.angle_start + region.angle_span});
  }

  constexpr double kChordTol = 1e-12;
  auto chord_y = [&](const Prob& cumulative) {
    double theta = solve_chord_angle(cumulative, kChordTol);
    return frame.cy - frame.r * std::cos(theta / 2.0);
  };
  auto chord_half_width = [&](const Prob& cumulative) {
    double theta = solve_chord_angle(cumulative, kChordTol);
    return frame.r * std::sin(theta / 2.0);
  };

  SvgBuilder svg;
  std::vector<LegendEntry> legend;

  // Slab fills.
  for (std::size_t i = 0; i < slabs.size(); ++i) {
    const Slab& slab = slabs[i];
    const std::string& fill = palette_color(style, i);
    if (slab.region->angle_span.is_zero()) continue;
    if (slab.region->angle_span.is_one()) {
      svg.circle(frame.cx, frame.cy, frame.r, fill, "", 0.0);
      continue;
    }
    bool at_top = slab.from.is_zero();
    bool at_bottom = slab.to.is_one();
    double y_top = at_top ? frame.cy - frame.r : chord_y(slab.from);
    double w_top = at_top ? 0.0 : chord_half_width(slab.from);
    double y_bot = at_bottom ? frame.cy + frame.r : chord_y(slab.to);
    double w_bot = at_bottom ? 0.0 : chord_half_width(slab.to);

    std::string d = "M " + format_double(frame.cx - w_top) + " " + format_double(y_top) +
                    " A " + format_double(frame.r) + " " + format_double(frame.r) +
                    " 0 0 0 " + format_double(frame.cx - w_bot) + " " +
                    format_double(y_bot) + " L " + format_double(frame.cx + w_bot) + " " +
                    format_double(y_bot) + " A " + format_double(frame.r) + " " +
                    format_double(frame.r) + " 0 0 0 " + format_double(frame.cx + w_top) +
                    " " + format_double(y_top) + " Z";
    svg.path(d, fill);
  }

  // Outer rim, then one full chord per internal boundary; the stroke width
  // follows the depth at which the two adjacent leaves diverge.
  svg.circle(frame.cx, frame.cy, frame.r, "none", "#1a1a1a",
             stroke_width_for_depth(style, 0));
  for (std::size_t i = 1; i < slabs.size(); ++i) {
    const EventPath& a = slabs[i - 1].region->node_path;
    const EventPath& b = slabs[i].region->node_path;
    std::size_t shared = 0;
    while (shared < a.size() && shared < b.size() && a[shared] == b[shared]) ++shared;
    const Prob& cumulative = slabs[i].from;
    if (cumulative.is_zero() || cumulative.is_one()) continue;
    double y = chord_y(cumulative);
    double w = chord_half_width(cumulative);
    svg.line(frame.cx - w, y, frame.cx + w, y, "#1a1a1a",
             stroke_width_for_depth(style, static_cast<int>(shared) + 1));
  }

  // Labels at each slab's vertical midpoint.
  for (std::size_t i = 0; i < slabs.size(); ++i) {
    const Slab& slab = slabs[i];
    std::string text = format_label(slab.region->node_path, concatenated) + " " +
                       slab.region->angle_span.percent_str(4);
    if (slab.region->angle_span < kLabelSpanFloor) {
      if (!slab.region->angle_span.is_zero()) legend.push_back(LegendEntry{text});
      continue;
    }
    double y_top = slab.from.is_zero() ? frame.cy - frame.r : chord_y(slab.from);
    double y_bot = slab.to.is_one() ? frame.cy + frame.r : chord_y(slab.to);
    double y = (y_top + y_bot) / 2.0;
    Prob mid_cumulative = slab.from + slab.region->angle_span * Prob(1, 2);
    double width = mid_cumulative.is_zero() || mid_cumulative.is_one()
                       ? 2.0 * frame.r
                       : 2.0 * chord_half_width(mid_cumulative);
    if (warnings && estimated_text_width(style, text) > width)
      warnings->push_back("canvas too small: label '" + text +
                          "' is wider than its slab");
    svg.text(frame.cx, y + style.font_size * 0.35, style.font_size, text);
  }

  emit_legend(svg, style, legend);
  return svg.finish(style.canvas_size);
}

std::string render_tree(const TreeLayout& layout, const Style& style) {
  check_style(style);

  double min_x = 0.0, max_x = 0.0, max_y = 0.0;
  bool first = true;
  for (const auto& [path, at] : layout.positions) {
    if (first) {
      min_x = max_x = at.x;
      first = false;
    }
    min_x = std::min(min_x, at.x);
    max_x = std::max(max_x, at.x);
    max_y = std::max(max_y, at.y);
  }

  double margin = 0.1 * style.canvas_size;
  double usable = style.canvas_size - 2.0 * margin;
  auto sx = [&](double x) {
    if (max_x == min_x) return style.canvas_size / 2.0;
    return margin + (x - min_x) / (max_x - min_x) * usable;
  };
  auto sy = [&](double y) {
    if (max_y == 0.0) return style.canvas_size / 2.0;
    return margin + y / max_y * usable;
  };

  double node_radius = std::max(9.0, style.font_size * 0.8);

  SvgBuilder svg;
  for (const TreeEdge& edge : layout.edges) {
    const Point& a = layout.positions.at(edge.parent);
    const Point& b = layout.positions.at(edge.child);
    svg.line(sx(a.x), sy(a.y), sx(b.x), sy(b.y), "#555555", 1.5);
  }
  for (const TreeEdge& edge : layout.edges) {
    const Point& a = layout.positions.at(edge.parent);
    const Point& b = layout.positions.at(edge.child);
    double mx = (sx(a.x) + sx(b.x)) / 2.0;
    double my = (sy(a.y) + sy(b.y)) / 2.0;
    svg.text(mx + 4.0, my - 4.0, style.font_size * 0.85, edge.weight.percent_str(4),
             "start");
  }
  for (const auto& [path, at] : layout.positions) {
    svg.circle(sx(at.x), sy(at.y), node_radius, "#ffffff", "#1a1a1a", 1.5);
  }
  for (const auto& [path, at] : layout.positions) {
    std::string name = path.empty() ? "*" : path.back();
    svg.text(sx(at.x), sy(at.y) + style.font_size * 0.35, style.font_size, name);
  }
  return svg.finish(style.canvas_size);
}

}  // namespace turtleglyph
