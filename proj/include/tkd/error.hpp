#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tkd {

enum class ErrorCode {
  // core-model
  invalid_template,
  path_out_of_range,
  path_not_leaf,
  header_readonly,
  header_record,
  unit_dimension_mismatch,
  not_arbitrary_split,
  invalid_value,
  // structure-dsl
  syntax_error,
  duplicate_graph_id,
  unknown_unit,
  version_mismatch,
  // layout-geom
  outside_table,
  no_arbitrary_split_on_path,
  chunk_too_small,
  record_taller_than_chunk,
  // catalog
  dimension_mismatch,
  duplicate_property,
  unknown_object_class,
  unresolved_placeholder,
  // spec-pipeline
  unknown_element_type,
  file_not_found,
  no_data_split,
  range_out_of_bounds,
  unknown_graph,
};

/// Stable kebab-case name used by the CLI and the HTTP facade.
std::string_view error_code_name(ErrorCode code);

struct SourcePos {
  int line = 0;    // 1-based
  int column = 0;  // 1-based, in codepoints
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::optional<SourcePos> pos = std::nullopt);

  ErrorCode code() const { return code_; }
  const std::optional<SourcePos>& pos() const { return pos_; }
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::optional<SourcePos> pos_;
};

}  // namespace tkd
