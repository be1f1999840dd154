#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tkd/model.hpp"

namespace tkd {

struct StructureParse {
  TableTemplate tmpl;
  /// Structural diagnostics (validate_template output) with source
  /// positions filled in.
  std::vector<Diagnostic> diagnostics;
};

/// Parses a `.tks` structure file:
///
///   file   := "table" STRING attrs? (block | "{" node "}")
///   block  := ("cols"|"rows") ("fixed" INT | "arb")? attrs? "{" node+ "}"
///   leaf   := "leaf" STRING (attrs | (KEY VALUE)*)
///   attrs  := "[" KEY "=" VALUE ("," KEY "=" VALUE)* "]"
///
/// Throws syntax-error, duplicate-graph-id or unknown-unit (positioned).
/// Structural problems (zero width, bad split arity, ...) are reported as
/// diagnostics instead, so editors can still show the tree.
StructureParse parse_structure(std::string_view text, int line_offset = 0);

/// Canonical form: two-space indentation, attributes in fixed key order,
/// defaults omitted. parse_structure(serialize_structure(t)).tmpl == t.
std::string serialize_structure(const TableTemplate& tmpl);

/// `.tkm` container: version line, canonical structure, continuation and
/// the per-record list of arbitrary-split part counts and leaf values.
std::string save_module(const TableModule& table);
/// Throws version-mismatch, syntax-error, invalid-template.
TableModule load_module(std::string_view text);

inline constexpr std::string_view kModuleVersion = "tkd/1";

}  // namespace tkd
