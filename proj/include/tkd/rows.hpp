#pragma once

#include <optional>
#include <vector>

#include "tkd/model.hpp"

namespace tkd {

/// A list of rows: either the record array itself (row i = record i, data
/// rows start at 1) or the parts of one arbitrary rows split inside a data
/// record (row i = part i).
struct RowListRef {
  std::optional<CellPath> split;

  bool is_records() const { return !split.has_value(); }
  bool operator==(const RowListRef&) const = default;
};

/// Half-open range [begin, end) of rows within one list.
struct RowRange {
  RowListRef list;
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end > begin ? end - begin : 0; }
};

/// Every data record: [1, records.size()).
RowRange all_data_rows(const TableModule& table);

std::size_t first_row_index(const RowListRef& list);
std::size_t row_count(const TableModule& table, const RowListRef& list);
/// Template of one row of the list (the record root or the prototype).
const BlockNode& row_template(const TableModule& table, const RowListRef& list);
CellPath row_path(const RowListRef& list, std::size_t index);
InstanceNode& row_instance(TableModule& table, const RowListRef& list, std::size_t index);
const InstanceNode& row_instance(const TableModule& table, const RowListRef& list, std::size_t index);

/// Throws range-out-of-bounds unless the range lies inside the data rows
/// of its list; throws not-arbitrary-split for a bad split address.
void check_range(const TableModule& table, const RowRange& range);

/// Inserts rows at position `pos` of the list (shifting later rows).
void insert_rows(TableModule& table, const RowListRef& list, std::size_t pos,
                 std::vector<InstanceNode> rows);
void erase_rows(TableModule& table, const RowListRef& list, std::size_t pos, std::size_t n);

struct LeafRef {
  const BlockNode* node;
  const InstanceNode* instance;
  std::vector<std::size_t> steps;  // relative to the row
};

/// Leaves of one row in depth-first order.
std::vector<LeafRef> row_leaves(const BlockNode& row_tmpl, const InstanceNode& row);
/// First leaf of the given graph in the row, or nullptr when the row has
/// none (e.g. an arbitrary split with zero parts).
const CellValue* row_value(const BlockNode& row_tmpl, const InstanceNode& row, std::string_view graph_id);

/// Row lists whose rows contain no further arbitrary split: the record
/// array when the record template is flat, otherwise every innermost
/// arbitrary split of every data record.
std::vector<RowListRef> flat_row_lists(const TableModule& table);

/// Path (within a row template) of the first arbitrary rows split whose
/// prototype is flat and which takes no part in an insert group.
std::optional<std::vector<std::size_t>> item_split_path(const BlockNode& row_tmpl);

}  // namespace tkd
