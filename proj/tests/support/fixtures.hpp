#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tkd/model.hpp"
#include "tkd/structure.hpp"

namespace tkd::testing {

inline std::string fixture_path(const std::string& name) { return std::string(TKD_FIXTURE_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline TableModule fixture_table(const std::string& tks) { return new_table(parse_structure(read_fixture(tks)).tmpl); }

/// The flange structure with one blank data record.
inline TableModule flange_table() {
  TableModule t = fixture_table("flange.tks");
  insert_record(t, 1);
  return t;
}

}  // namespace tkd::testing
