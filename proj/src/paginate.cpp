#include <cmath>

#include "tkd/layout.hpp"
#include "tkd/text_util.hpp"

namespace tkd {

namespace {
constexpr double kEps = 1e-9;
}

PaginateOptions paginate_options(const ContinuationSpec& spec) {
  PaginateOptions o;
  o.direction = spec.direction;
  o.repeat_header = spec.repeat_header;
  o.number_row = spec.number_row;
  o.first_number = spec.first_graph_number;
  return o;
}

std::vector<Segment> paginate(const TableModule& table, double chunk_height_mm, const PaginateOptions& options,
                              const LayoutOptions& layout_options) {
  const double rh = layout_options.row_height_mm;
  const double header_h = record_height(table, 0, layout_options);
  const double band_h = options.number_row ? rh : 0.0;
  if (!(chunk_height_mm + kEps >= header_h + band_h + rh)) {
    throw Error(ErrorCode::chunk_too_small, "chunk height " + text::format_exact(chunk_height_mm) +
                                                 " mm is below header height + one row (" +
                                                text::format_exact(header_h + band_h + rh) + " mm)");
  }
  const double width = table.tmpl.root.width();
  std::vector<int> numbers;
  if (options.number_row) {
    const auto graphs = enumerate_graphs(table.tmpl);
    for (std::size_t i = 0; i < graphs.size(); ++i) numbers.push_back(options.first_number + static_cast<int>(i));
  }

  std::vector<Segment> out;
  auto open_segment = [&](std::size_t begin) {
    Segment s;
    s.record_begin = begin;
    s.record_end = begin;
    s.header_repeated = begin > 0 && options.repeat_header;
    s.number_row = options.number_row;
    s.graph_numbers = numbers;
    s.rect.height = (begin == 0 ? header_h : (s.header_repeated ? header_h : 0.0)) + band_h;
    if (begin == 0) s.record_end = 1;
    return s;
  };

  Segment current = open_segment(0);
  for (std::size_t r = 1; r < table.records.size(); ++r) {
    const double h = record_height(table, r, layout_options);
    if (current.rect.height + h <= chunk_height_mm + kEps) {
      current.rect.height += h;
      current.record_end = r + 1;
      continue;
    }
    out.push_back(current);
    current = open_segment(r);
    if (current.rect.height + h > chunk_height_mm + kEps) {
      throw Error(ErrorCode::record_taller_than_chunk,
                  "record " + std::to_string(r) + " (" + text::format_exact(h) + " mm) does not fit a " +
                      text::format_exact(chunk_height_mm) + " mm chunk");
    }
    current.rect.height += h;
    current.record_end = r + 1;
  }
  out.push_back(current);

  for (std::size_t i = 0; i < out.size(); ++i) {
    const double offset = static_cast<double>(i) * (width + options.gap_mm);
    out[i].rect.x = options.direction == Direction::right ? offset : -offset;
    out[i].rect.y = 0.0;
    out[i].rect.width = width;
  }
  return out;
}

}  // namespace tkd
