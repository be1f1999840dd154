#pragma once

#include <vector>

#include "tkd/layout.hpp"
#include "tkd/model.hpp"

namespace tkd::detail {

enum class Region { header, data };

inline Region region_of(std::size_t record) { return record == 0 ? Region::header : Region::data; }

inline bool visible_in(const BlockNode& node, Region region) {
  return region == Region::header ? node.visible_in_header : node.visible_in_data;
}

inline const BlockNode& child_template(const BlockNode& node, std::size_t i) {
  return node.arbitrary ? node.children.front() : node.children[i];
}

/// Leaf: (lines x row height) when the leaf shows in the region, else 0.
/// Rows split: sum of parts. Columns split: tallest part.
double natural_height(const BlockNode& node, const InstanceNode& inst, Region region, double row_height,
                      bool header_hidden = false);

/// Heights of a rows split's parts when the split is given `total`: the
/// surplus goes to the last part with positive natural height (or the last
/// part when all are empty).
std::vector<double> distribute_rows(const BlockNode& node, const InstanceNode& inst, Region region,
                                    double row_height, double total, bool header_hidden);

/// x offset and width of every graph in enumerate_graphs() order.
std::vector<std::pair<double, double>> graph_columns(const BlockNode& root);

}  // namespace tkd::detail
