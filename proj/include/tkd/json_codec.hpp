#pragma once

// JSON mirrors of the domain types used by the HTTP facade.

#include <json.hpp>
#include <stdexcept>

#include "tkd/catalog.hpp"
#include "tkd/item_buffer.hpp"
#include "tkd/layout.hpp"
#include "tkd/model.hpp"
#include "tkd/rows.hpp"

namespace tkd::json {

using nlohmann::json;

/// Malformed request body (a usage error, not a domain error).
struct BadRequest : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json to_json(const CellValue& v);
/// Accepts {"text", "numeric", "unit"}; a bare string is plain text.
CellValue cell_value_from_json(const json& j);

json to_json(const CellPath& p);
/// Accepts {"record", "steps"} or the "r:a.b.c" form.
CellPath cell_path_from_json(const json& j);

json to_json(const BlockNode& node);
json to_json(const TableTemplate& tmpl);
json to_json(const InstanceNode& node);
json to_json(const ContinuationSpec& c);
json to_json(const TableModule& table);
json to_json(const Diagnostic& d);
json to_json(const Error& e);

json to_json(const LayoutTree& tree);
json to_json(const Segment& s);

json to_json(const PropertySet& props);
PropertySet property_set_from_json(const json& j);
json to_json(const ItemBuffer& buffer);
ItemBuffer item_buffer_from_json(const json& j);

json to_json(const ConstraintSet& c);
json to_json(const RowListRef& list);
/// {"list": null | CellPath, "begin", "end"}; begin/end default to the
/// whole list.
RowRange row_range_from_json(const TableModule& table, const json& j);
RowListRef row_list_from_json(const json& j);

}  // namespace tkd::json
