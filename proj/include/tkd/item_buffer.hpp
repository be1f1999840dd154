#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tkd/catalog.hpp"
#include "tkd/rows.hpp"

namespace tkd {

/// Rows carried between tables as property-keyed value sets.
struct ItemBuffer {
  std::vector<PropertySet> rows;

  bool operator==(const ItemBuffer&) const = default;
};

/// One PropertySet per row, keyed by the property_id of each graph (first
/// graph wins when two carry the same id). Numeric values are tagged with
/// the leaf unit. Throws range-out-of-bounds.
ItemBuffer copy_to_buffer(const TableModule& table, const RowRange& range);

struct PasteReport {
  std::vector<CellPath> rows;
  std::vector<int> dropped;  // buffer property ids with no target graph, sorted
};

/// Inserts one row per buffer row after row `after` of the list (nullopt:
/// before the first data row). Values are matched to graphs by property_id
/// and converted into the graph units. The table is left untouched when an
/// error is raised. Throws header-record, range-out-of-bounds,
/// unit-dimension-mismatch.
PasteReport paste_from_buffer(const ItemBuffer& buffer, TableModule& table, const RowListRef& list,
                              std::optional<std::size_t> after);

/// `.tkb` text:
///
///   tkd-buffer/1
///   @rows N
///   row I
///     prop ID VALUE
///   @end
std::string save_buffer(const ItemBuffer& buffer);
/// Throws version-mismatch, syntax-error.
ItemBuffer load_buffer(std::string_view text);

inline constexpr std::string_view kBufferVersion = "tkd-buffer/1";

}  // namespace tkd
