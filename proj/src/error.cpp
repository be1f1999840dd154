#include "tkd/error.hpp"

namespace tkd {

namespace {

std::string format_what(ErrorCode code, const std::string& message,
                        const std::optional<SourcePos>& pos) {
  std::string out(error_code_name(code));
  if (pos) {
    out += " at " + std::to_string(pos->line) + ":" + std::to_string(pos->column);
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_template: return "invalid-template";
    case ErrorCode::path_out_of_range: return "path-out-of-range";
    case ErrorCode::path_not_leaf: return "path-not-leaf";
    case ErrorCode::header_readonly: return "header-readonly";
    case ErrorCode::header_record: return "header-record";
    case ErrorCode::unit_dimension_mismatch: return "unit-dimension-mismatch";
    case ErrorCode::not_arbitrary_split: return "not-arbitrary-split";
    case ErrorCode::invalid_value: return "invalid-value";
    case ErrorCode::syntax_error: return "syntax-error";
    case ErrorCode::duplicate_graph_id: return "duplicate-graph-id";
    case ErrorCode::unknown_unit: return "unknown-unit";
    case ErrorCode::version_mismatch: return "version-mismatch";
    case ErrorCode::outside_table: return "outside-table";
    case ErrorCode::no_arbitrary_split_on_path: return "no-arbitrary-split-on-path";
    case ErrorCode::chunk_too_small: return "chunk-too-small";
    case ErrorCode::record_taller_than_chunk: return "record-taller-than-chunk";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::duplicate_property: return "duplicate-property";
    case ErrorCode::unknown_object_class: return "unknown-object-class";
    case ErrorCode::unresolved_placeholder: return "unresolved-placeholder";
    case ErrorCode::unknown_element_type: return "unknown-element-type";
    case ErrorCode::file_not_found: return "file-not-found";
    case ErrorCode::no_data_split: return "no-data-split";
    case ErrorCode::range_out_of_bounds: return "range-out-of-bounds";
    case ErrorCode::unknown_graph: return "unknown-graph";
  }
  return "unknown";
}

Error::Error(ErrorCode code, std::string message, std::optional<SourcePos> pos)
    : std::runtime_error(format_what(code, message, pos)),
      code_(code),
      message_(std::move(message)),
      pos_(pos) {}

}  // namespace tkd
