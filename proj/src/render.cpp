#include <algorithm>
#include <cmath>

#include "tkd/layout.hpp"
#include "tkd/text_util.hpp"

namespace tkd {

namespace {

struct GridCell {
  bool horizontal = false;
  bool thick = false;
  bool vertical = false;
  std::string glyph = " ";
};

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string num(double v) { return text::format_fixed(v, 3); }

}  // namespace

std::string render_text(const TableModule& table, const LayoutOptions& options) {
  return render_text(layout(table, options));
}

std::string render_text(const LayoutTree& tree) {
  const double rh = tree.options.row_height_mm;
  const double cw = tree.options.char_width_mm;
  // two character rows per row unit: a border row and a text row
  auto gx = [&](double x) { return static_cast<long>(std::lround(x / cw)); };
  auto gy = [&](double y) { return static_cast<long>(std::lround(y / rh * 2.0)); };
  const long cols = gx(tree.width) + 1;
  const long rows = gy(tree.height) + 1;
  if (cols <= 0 || rows <= 0) return {};
  std::vector<std::vector<GridCell>> grid(static_cast<std::size_t>(rows),
                                          std::vector<GridCell>(static_cast<std::size_t>(cols)));
  auto at = [&](long r, long c) -> GridCell* {
    if (r < 0 || c < 0 || r >= rows || c >= cols) return nullptr;
    return &grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  };

  for (const auto& line : tree.lines) {
    if (line.type == LineType::none) continue;
    if (std::fabs(line.from.y - line.to.y) < 1e-9) {
      const long r = gy(line.from.y);
      for (long c = gx(std::min(line.from.x, line.to.x)); c <= gx(std::max(line.from.x, line.to.x)); ++c) {
        if (auto* cell = at(r, c)) {
          cell->horizontal = true;
          cell->thick = cell->thick || line.type == LineType::thick;
        }
      }
    } else {
      const long c = gx(line.from.x);
      for (long r = gy(std::min(line.from.y, line.to.y)); r <= gy(std::max(line.from.y, line.to.y)); ++r) {
        if (auto* cell = at(r, c)) cell->vertical = true;
      }
    }
  }

  for (const auto& run : tree.texts) {
    // the text row of the run's line: one below the border row of its line
    const long r = gy(run.baseline.y - rh / 2 - 0.35 * run.size_mm) + 1;
    long c = gx(run.baseline.x - 1.0) + 1;
    // clip at the next vertical border
    for (const auto& cp : text::codepoints(run.text)) {
      auto* cell = at(r, c);
      if (!cell || cell->vertical || cell->horizontal) break;
      cell->glyph = cp;
      ++c;
    }
  }

  std::string out;
  for (const auto& row : grid) {
    std::string line;
    for (const auto& cell : row) {
      if (cell.horizontal && cell.vertical) {
        line += '+';
      } else if (cell.horizontal) {
        line += cell.thick ? '=' : '-';
      } else if (cell.vertical) {
        line += '|';
      } else {
        line += cell.glyph;
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line;
    out += '\n';
  }
  return out;
}

double stroke_width(LineType type);

std::string render_svg(const TableModule& table, const LayoutOptions& options) {
  return render_svg(std::vector<LayoutTree>{layout(table, options)});
}

std::string render_svg(const std::vector<LayoutTree>& pages) {
  double min_x = 0.0, max_x = 0.0, max_y = 0.0;
  bool first = true;
  for (const auto& page : pages) {
    for (const auto& l : page.lines) {
      for (const Point& p : {l.from, l.to}) {
        if (first) {
          min_x = max_x = p.x;
          first = false;
        }
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
      }
    }
  }
  if (first && !pages.empty()) {
    max_x = pages.front().width;
    max_y = pages.front().height;
  }
  const double width = max_x - min_x;
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(width) + "mm\" height=\"" +
         num(max_y) + "mm\" viewBox=\"" + num(min_x) + " 0 " + num(width) + " " + num(max_y) + "\">\n";
  for (const auto& page : pages) {
    out += "<g stroke=\"black\" stroke-linecap=\"square\">\n";
    for (const auto& l : page.lines) {
      out += "<line x1=\"" + num(l.from.x) + "\" y1=\"" + num(l.from.y) + "\" x2=\"" + num(l.to.x) + "\" y2=\"" +
             num(l.to.y) + "\" stroke-width=\"" + num(stroke_width(l.type)) + "\"/>\n";
    }
    out += "</g>\n<g fill=\"black\">\n";
    for (const auto& t : page.texts) {
      out += "<text x=\"" + num(t.baseline.x) + "\" y=\"" + num(t.baseline.y) + "\" font-size=\"" + num(t.size_mm) +
             "\" font-family=\"" + xml_escape(t.font_tag) + "\">" + xml_escape(t.text) + "</text>\n";
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace tkd
