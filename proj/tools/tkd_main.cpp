// tkd: command-line front end for table modules.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tkd/catalog.hpp"
#include "tkd/http_api.hpp"
#include "tkd/item_buffer.hpp"
#include "tkd/layout.hpp"
#include "tkd/spec_pipeline.hpp"
#include "tkd/structure.hpp"
#include "tkd/text_util.hpp"
#include "tkd/units.hpp"

namespace {

using namespace tkd;

/// Error raised while handling a named file; keeps the name for messages.
struct FileError {
  std::string file;
  Error error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::file_not_found, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::file_not_found, "cannot write '" + path + "'");
  out << content;
}

template <class F>
auto with_file(const std::string& path, F&& f) {
  try {
    return f(read_file(path));
  } catch (const Error& e) {
    throw FileError{path, e};
  }
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// A .tkm module, or a fresh table when given a .tks structure.
TableModule load_table(const std::string& path) {
  return with_file(path, [&](const std::string& text) {
    if (ends_with(path, ".tks")) return new_table(parse_structure(text).tmpl);
    return load_module(text);
  });
}

RowRange cli_range(const TableModule& t, const std::string& list, long long from, long long to) {
  RowRange r;
  if (!list.empty()) r.list.split = parse_cell_path(list);
  r.begin = from >= 0 ? static_cast<std::size_t>(from) : first_row_index(r.list);
  r.end = to >= 0 ? static_cast<std::size_t>(to) : row_count(t, r.list);
  return r;
}

std::string data_dir_or_env(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("TKD_DATA_DIR")) return env;
  return {};
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int print_error(const std::string& file, const Error& e) {
  std::cerr << "tkd: ";
  if (!file.empty()) {
    std::cerr << file << ':';
    if (e.pos()) std::cerr << e.pos()->line << ':' << e.pos()->column << ':';
    std::cerr << ' ';
  } else if (e.pos()) {
    std::cerr << e.pos()->line << ':' << e.pos()->column << ": ";
  }
  std::cerr << error_code_name(e.code()) << ": " << e.message() << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tabular design documents: structures, modules, catalogs, specifications"};
  app.require_subcommand(1);

  // validate
  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a .tks structure file");
  validate->add_option("tks", validate_path, "Structure file")->required();

  // new
  std::string new_path, new_out;
  auto* create = app.add_subcommand("new", "Create an empty module from a structure");
  create->add_option("tks", new_path, "Structure file")->required();
  create->add_option("-o,--output", new_out, "Output .tkm (default stdout)");
  std::size_t new_records = 0;
  create->add_option("--records", new_records, "Number of blank data records");

  // render
  std::string render_path, render_fmt = "text", render_out;
  double render_height = 0.0;
  auto* render = app.add_subcommand("render", "Render a module as monospace text or SVG");
  render->add_option("tkm", render_path, "Module (.tkm) or structure (.tks)")->required();
  render->add_option("--fmt", render_fmt, "text or svg")->check(CLI::IsMember({"text", "svg"}));
  render->add_option("--height", render_height, "Paginate into chunks of this height (svg)");
  render->add_option("-o,--output", render_out, "Output file (default stdout)");

  // paginate
  std::string pag_path, pag_direction, pag_svg;
  double pag_height = 0.0;
  int pag_numbers = 0;
  bool pag_repeat = false, pag_no_repeat = false;
  auto* pag = app.add_subcommand("paginate", "Split a module into continuation segments");
  pag->add_option("tkm", pag_path, "Module")->required();
  pag->add_option("--height", pag_height, "Chunk height in mm")->required();
  pag->add_flag("--repeat-header", pag_repeat, "Repeat the header on every segment");
  pag->add_flag("--no-repeat-header", pag_no_repeat, "Do not repeat the header");
  pag->add_option("--numbers", pag_numbers, "Number row starting at this graph number");
  pag->add_option("--direction", pag_direction, "left or right")->check(CLI::IsMember({"left", "right"}));
  pag->add_option("--svg", pag_svg, "Also write the paginated drawing");

  // spec-gen
  std::string sg_scope, sg_types, sg_template, sg_out, sg_dir;
  auto* specgen = app.add_subcommand("spec-gen", "Generate a specification from drawing files");
  specgen->add_option("--scope", sg_scope, "Comma-separated drawing files")->required();
  specgen->add_option("--types", sg_types, "Comma-separated element types (default all)");
  specgen->add_option("--template", sg_template, "Target structure (.tks) or module (.tkm)")->required();
  specgen->add_option("--dir", sg_dir, "Directory of drawing files (default: data dir or .)");
  specgen->add_option("-o,--output", sg_out, "Output .tkm (default stdout)");

  // catalog query
  std::string cq_class, cq_p, cq_t, cq_data_dir;
  std::vector<std::string> cq_catalogs, cq_rules;
  int cq_dn = 0;
  auto* catalog = app.add_subcommand("catalog", "Catalog operations");
  catalog->require_subcommand(1);
  auto* cquery = catalog->add_subcommand("query", "Items of an object class that accept the constraints");
  cquery->add_option("--class", cq_class, "Object class")->required();
  cquery->add_option("--p", cq_p, "Working pressure, e.g. 1.6МПа (bare numbers are МПа)");
  cquery->add_option("--t", cq_t, "Working temperature, e.g. 80°C (bare numbers are °C)");
  auto* dn_opt = cquery->add_option("--dn", cq_dn, "Nominal diameter");
  cquery->add_option("--catalog", cq_catalogs, "Catalog file (repeatable)");
  cquery->add_option("--rules", cq_rules, "Rules file (repeatable)");
  cquery->add_option("--data-dir", cq_data_dir, "Directory of .cat/.rules files (default TKD_DATA_DIR)");

  // buffer copy / paste
  std::string bc_path, bc_list, bc_out;
  long long bc_from = -1, bc_to = -1;
  auto* buffer = app.add_subcommand("buffer", "Item buffer operations");
  buffer->require_subcommand(1);
  auto* bcopy = buffer->add_subcommand("copy", "Copy rows of a module into a .tkb buffer");
  bcopy->add_option("tkm", bc_path, "Source module")->required();
  bcopy->add_option("--from", bc_from, "First row (default first data row)");
  bcopy->add_option("--to", bc_to, "End row, exclusive (default all)");
  bcopy->add_option("--list", bc_list, "Arbitrary split holding the rows, e.g. 1:0.2");
  bcopy->add_option("-o,--output", bc_out, "Output .tkb (default stdout)");

  std::string bp_buffer, bp_path, bp_list, bp_out;
  long long bp_after = -1;
  auto* bpaste = buffer->add_subcommand("paste", "Paste a .tkb buffer into a module");
  bpaste->add_option("tkb", bp_buffer, "Buffer file")->required();
  bpaste->add_option("tkm", bp_path, "Target module (.tkm or .tks)")->required();
  bpaste->add_option("--after", bp_after, "Insert after this row (default: before the first data row)");
  bpaste->add_option("--list", bp_list, "Arbitrary split receiving the rows");
  bpaste->add_option("-o,--output", bp_out, "Output .tkm (default stdout)");

  // set / insert / op
  std::string set_path, set_cell_path, set_value, set_unit, set_out;
  auto* setc = app.add_subcommand("set", "Write one cell");
  setc->add_option("tkm", set_path, "Module")->required();
  setc->add_option("cell", set_cell_path, "Cell path, e.g. 1:0.2")->required();
  setc->add_option("value", set_value, "Text or number")->required();
  setc->add_option("--unit", set_unit, "Unit of a numeric value");
  setc->add_option("-o,--output", set_out, "Output .tkm (default stdout)");

  std::string ins_path, ins_out;
  double ins_x = 0, ins_y = 0;
  auto* ins = app.add_subcommand("insert", "Insert parts at a point (mm from the top-left corner)");
  ins->add_option("tkm", ins_path, "Module")->required();
  ins->add_option("--x", ins_x, "x in mm")->required();
  ins->add_option("--y", ins_y, "y in mm")->required();
  ins->add_option("-o,--output", ins_out, "Output .tkm (default stdout)");

  std::string op_name, op_path, op_list, op_graphs, op_out;
  long long op_from = -1, op_to = -1;
  auto* op = app.add_subcommand("op", "Row operations: merge, sort, extract, pack");
  op->add_option("name", op_name, "Operation")->required()->check(CLI::IsMember({"merge", "sort", "extract", "pack"}));
  op->add_option("tkm", op_path, "Module")->required();
  op->add_option("--from", op_from, "First row");
  op->add_option("--to", op_to, "End row, exclusive");
  op->add_option("--list", op_list, "Arbitrary split holding the rows");
  op->add_option("--graphs", op_graphs, "Comma-separated graph ids (sort, extract)");
  op->add_option("-o,--output", op_out, "Output .tkm (default stdout)");

  // serve
  int port = 8080;
  std::string host = "127.0.0.1", serve_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP/JSON service");
  serve->add_option("--port", port, "Port");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--data-dir", serve_dir, "Data directory (default TKD_DATA_DIR)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate) {
      auto parsed = with_file(validate_path, [](const std::string& text) { return parse_structure(text); });
      bool failed = false;
      for (const auto& d : parsed.diagnostics) {
        const bool error = d.severity == Diagnostic::Severity::error;
        failed = failed || error;
        std::cerr << validate_path << ':';
        if (d.pos) std::cerr << d.pos->line << ':' << d.pos->column << ':';
        std::cerr << ' ' << (error ? "error" : "warning") << ": " << d.message << '\n';
      }
      if (failed) return 1;
      std::cout << validate_path << ": ok, " << enumerate_graphs(parsed.tmpl).size() << " graphs\n";
    } else if (*create) {
      auto table = with_file(new_path, [](const std::string& text) { return new_table(parse_structure(text).tmpl); });
      for (std::size_t i = 0; i < new_records; ++i) insert_record(table, table.records.size());
      write_output(new_out, save_module(table));
    } else if (*render) {
      auto table = load_table(render_path);
      if (render_fmt == "text") {
        write_output(render_out, render_text(table));
      } else if (render_height > 0) {
        std::vector<LayoutTree> pages;
        for (const auto& s : paginate(table, render_height, paginate_options(table.continuation))) {
          pages.push_back(layout_segment(table, s));
        }
        write_output(render_out, render_svg(pages));
      } else {
        write_output(render_out, render_svg(table));
      }
    } else if (*pag) {
      auto table = load_table(pag_path);
      auto opts = paginate_options(table.continuation);
      if (pag_repeat) opts.repeat_header = true;
      if (pag_no_repeat) opts.repeat_header = false;
      if (pag->count("--numbers")) {
        opts.number_row = true;
        opts.first_number = pag_numbers;
      }
      if (!pag_direction.empty()) opts.direction = pag_direction == "left" ? Direction::left : Direction::right;
      auto segments = paginate(table, pag_height, opts);
      std::string out;
      for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        out += "segment " + std::to_string(i + 1) + ": records " + std::to_string(s.record_begin) + ".." +
               std::to_string(s.record_end) + " x " + text::format_fixed(s.rect.x, 3) + " height " +
               text::format_fixed(s.rect.height, 3);
        if (s.header_repeated) out += " header";
        if (s.number_row && !s.graph_numbers.empty()) {
          out += " numbers " + std::to_string(s.graph_numbers.front()) + ".." + std::to_string(s.graph_numbers.back());
        }
        out += '\n';
      }
      std::cout << out;
      if (!pag_svg.empty()) {
        std::vector<LayoutTree> pages;
        for (const auto& s : segments) pages.push_back(layout_segment(table, s));
        write_output(pag_svg, render_svg(pages));
      }
    } else if (*specgen) {
      auto table = load_table(sg_template);
      CollectionScope scope;
      scope.files = split_list(sg_scope);
      for (const auto& t : split_list(sg_types)) scope.element_types.insert(t);
      std::string dir = sg_dir.empty() ? data_dir_or_env({}) : sg_dir;
      auto entries = collect(scope, directory_loader(dir.empty() ? "." : dir));
      auto report = autofill(table, entries);
      if (!report.dropped.empty()) {
        std::cerr << "dropped properties:";
        for (int id : report.dropped) std::cerr << ' ' << id;
        std::cerr << '\n';
      }
      write_output(sg_out, save_module(table));
    } else if (*cquery) {
      CatalogStore store;
      PropertyRules rules;
      for (const auto& f : cq_catalogs) {
        store.catalogs.push_back(with_file(f, [](const std::string& t) { return load_catalog(t); }));
      }
      for (const auto& f : cq_rules) {
        auto r = with_file(f, [](const std::string& t) { return load_rules(t); });
        rules.rules.insert(rules.rules.end(), r.rules.begin(), r.rules.end());
      }
      if (cq_catalogs.empty()) {
        Workspace ws(data_dir_or_env(cq_data_dir));
        ws.load_catalogs();
        store = ws.catalogs();
        if (cq_rules.empty()) rules = ws.rules();
      }
      ConstraintSet c;
      if (!cq_p.empty()) {
        auto [v, u] = parse_quantity(cq_p);
        c.pressure = Quantity{v, u.empty() ? "МПа" : u};
      }
      if (!cq_t.empty()) {
        auto [v, u] = parse_quantity(cq_t);
        c.temperature = Quantity{v, u.empty() ? "°C" : u};
      }
      if (dn_opt->count()) c.dn = cq_dn;
      std::string out;
      for (const auto& m : query(store, cq_class, c)) {
        const auto& cat = store.catalogs[m.catalog];
        const auto& item = cat.items[m.item];
        out += std::to_string(m.catalog) + ":" + std::to_string(m.item);
        for (std::size_t f = 0; f < cat.fields.size(); ++f) out += " " + cat.fields[f].name + "=" + item.values[f].text;
        const auto props = apply_rules(rules, cat, item);
        if (auto name = props.find(3); name != props.end()) out += " | " + name->second.text;
        out += '\n';
      }
      std::cout << out;
    } else if (*bcopy) {
      auto table = load_table(bc_path);
      write_output(bc_out, save_buffer(copy_to_buffer(table, cli_range(table, bc_list, bc_from, bc_to))));
    } else if (*bpaste) {
      auto buf = with_file(bp_buffer, [](const std::string& t) { return load_buffer(t); });
      auto table = load_table(bp_path);
      RowListRef list;
      if (!bp_list.empty()) list.split = parse_cell_path(bp_list);
      std::optional<std::size_t> after;
      if (bp_after >= 0) after = static_cast<std::size_t>(bp_after);
      auto report = paste_from_buffer(buf, table, list, after);
      if (!report.dropped.empty()) {
        std::cerr << "dropped properties:";
        for (int id : report.dropped) std::cerr << ' ' << id;
        std::cerr << '\n';
      }
      write_output(bp_out, save_module(table));
    } else if (*setc) {
      auto table = load_table(set_path);
      CellValue v = CellValue::from_text(set_value);
      if (!set_unit.empty()) v.unit = set_unit;
      set_cell(table, parse_cell_path(set_cell_path), v);
      write_output(set_out, save_module(table));
    } else if (*ins) {
      auto table = load_table(ins_path);
      auto result = insert_at_point(table, {ins_x, ins_y});
      for (const auto& p : result.created) std::cerr << "created " << format_cell_path(p) << '\n';
      write_output(ins_out, save_module(table));
    } else if (*op) {
      auto table = load_table(op_path);
      auto range = cli_range(table, op_list, op_from, op_to);
      auto graphs = split_list(op_graphs);
      if (op_name == "merge") {
        std::cerr << "removed " << merge_identical(table, range) << " rows\n";
      } else if (op_name == "sort") {
        if (op_from < 0 && op_to < 0 && op_list.empty()) {
          sort_records(table, graphs);
        } else {
          sort_rows(table, range, graphs);
        }
      } else if (op_name == "extract") {
        if (graphs.size() != 1) {
          std::cerr << "tkd: extract needs exactly one graph in --graphs\n";
          return 2;
        }
        auto res = extract_common_names(table, range, graphs.front());
        std::cerr << (res.applied ? "common name: " + res.header : std::string("no common name")) << '\n';
      } else {
        pack_rows(table, range);
      }
      write_output(op_out, save_module(table));
    } else if (*serve) {
      Workspace ws(data_dir_or_env(serve_dir));
      ws.load_catalogs();
      std::cerr << "tkd: serving on " << host << ':' << port << '\n';
      if (!http::serve(ws, host, port)) {
        std::cerr << "tkd: cannot listen on " << host << ':' << port << '\n';
        return 1;
      }
    }
  } catch (const FileError& e) {
    return print_error(e.file, e.error);
  } catch (const Error& e) {
    return print_error({}, e);
  }
  return 0;
}
