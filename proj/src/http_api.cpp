#include "tkd/http_api.hpp"

#include <httplib.h>

#include <fstream>
#include <sstream>

#include "tkd/json_codec.hpp"
#include "tkd/layout.hpp"
#include "tkd/spec_pipeline.hpp"
#include "tkd/structure.hpp"
#include "tkd/text_util.hpp"
#include "tkd/units.hpp"

namespace tkd::http {

namespace {

namespace codec = tkd::json;
using codec::BadRequest;
using nlohmann::json;

struct NotFound {
  std::string what;
};

Response reply(int status, const json& body) { return {status, "application/json", body.dump()}; }

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : path) {
    if (ch == '/') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

json parse_body(const Request& r) {
  if (r.body.empty()) return json::object();
  try {
    json j = json::parse(r.body);
    if (!j.is_object()) throw BadRequest("request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw BadRequest(std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& body, const char* name) {
  if (!body.contains(name)) throw BadRequest(std::string("missing field '") + name + "'");
  return body[name];
}

std::uint64_t revision_of(const json& body) {
  const auto& r = field(body, "revision");
  if (!r.is_number_unsigned()) throw BadRequest("revision must be a non-negative integer");
  return r.get<std::uint64_t>();
}

double query_number(const Request& r, const std::string& key) {
  auto it = r.query.find(key);
  if (it == r.query.end()) throw BadRequest("missing query parameter '" + key + "'");
  auto v = text::parse_number(it->second);
  if (!v) throw BadRequest("query parameter '" + key + "' is not a number");
  return *v;
}

json mutation_reply(const Snapshot& snap, json extra = json::object()) {
  extra["id"] = snap.id;
  extra["revision"] = snap.revision;
  extra["geometry"] = codec::to_json(layout(*snap.table));
  return extra;
}

json document_reply(const Snapshot& snap) {
  return json{{"id", snap.id},
              {"revision", snap.revision},
              {"module", codec::to_json(*snap.table)},
              {"tkm", save_module(*snap.table)},
              {"geometry", codec::to_json(layout(*snap.table))}};
}

std::string read_data_file(const Workspace& ws, const std::string& name) {
  if (name.find("..") != std::string::npos) throw BadRequest("file names may not contain '..'");
  std::string path = ws.data_dir().empty() ? name : ws.data_dir() + "/" + name;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::file_not_found, "cannot open '" + name + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TableModule module_from_body(const Workspace& ws, const json& body) {
  if (body.contains("tkm")) return load_module(body["tkm"].get<std::string>());
  if (body.contains("tks")) {
    auto parsed = parse_structure(body["tks"].get<std::string>());
    return new_table(std::move(parsed.tmpl));
  }
  if (body.contains("file")) {
    const auto name = body["file"].get<std::string>();
    const auto text = read_data_file(ws, name);
    if (name.size() > 4 && name.substr(name.size() - 4) == ".tks") return new_table(parse_structure(text).tmpl);
    return load_module(text);
  }
  throw BadRequest("expected one of 'tkm', 'tks' or 'file'");
}

json match_json(const Workspace& ws, const CatalogMatch& m) {
  const auto& cat = ws.catalogs().catalogs[m.catalog];
  const auto& item = cat.items[m.item];
  json values = json::object();
  for (std::size_t f = 0; f < cat.fields.size(); ++f) values[cat.fields[f].name] = item.values[f].text;
  return json{{"catalog", m.catalog},
              {"item", m.item},
              {"object_class", cat.object_class},
              {"values", values},
              {"properties", codec::to_json(apply_rules(ws.rules(), cat, item))}};
}

Response catalog_query(Workspace& ws, const Request& r) {
  std::string object_class;
  ConstraintSet constraints;
  if (auto doc = r.query.find("doc"); doc != r.query.end()) {
    auto cell_it = r.query.find("cell");
    if (cell_it == r.query.end()) throw BadRequest("'doc' needs 'cell'");
    auto snap = ws.get(doc->second);
    CellPath cell = parse_cell_path(cell_it->second);
    object_class = template_node_at(snap.table->tmpl, cell.steps).object_class;
    constraints = gather_constraints(*snap.table, cell);
  }
  if (auto it = r.query.find("class"); it != r.query.end()) object_class = it->second;
  if (object_class.empty()) throw BadRequest("missing query parameter 'class'");
  if (auto it = r.query.find("t"); it != r.query.end()) {
    auto [v, u] = parse_quantity(it->second);
    constraints.temperature = Quantity{v, u.empty() ? "°C" : u};
  }
  if (auto it = r.query.find("p"); it != r.query.end()) {
    auto [v, u] = parse_quantity(it->second);
    constraints.pressure = Quantity{v, u.empty() ? "МПа" : u};
  }
  if (r.query.count("dn")) constraints.dn = static_cast<int>(query_number(r, "dn"));
  json matches = json::array();
  for (const auto& m : query(ws.catalogs(), object_class, constraints)) matches.push_back(match_json(ws, m));
  return reply(200, json{{"object_class", object_class},
                         {"constraints", codec::to_json(constraints)},
                         {"matches", matches}});
}

json run_op(Workspace& ws, TableModule& t, const json& body) {
  const std::string op = field(body, "op").get<std::string>();
  if (op == "merge") {
    return json{{"removed", merge_identical(t, codec::row_range_from_json(t, field(body, "range")))}};
  }
  if (op == "sort") {
    auto graphs = field(body, "graphs").get<std::vector<std::string>>();
    if (body.contains("range")) {
      sort_rows(t, codec::row_range_from_json(t, body["range"]), graphs);
    } else {
      sort_records(t, graphs);
    }
    return json::object();
  }
  if (op == "extract") {
    auto res = extract_common_names(t, codec::row_range_from_json(t, field(body, "range")),
                                    field(body, "graph").get<std::string>());
    return json{{"applied", res.applied}, {"header", res.header}};
  }
  if (op == "pack") {
    pack_rows(t, codec::row_range_from_json(t, field(body, "range")));
    return json::object();
  }
  if (op == "insert_part") {
    json created = json::array();
    for (const auto& p : insert_part(t, codec::cell_path_from_json(field(body, "split")),
                                     field(body, "at").get<std::size_t>())) {
      created.push_back(codec::to_json(p));
    }
    return json{{"created", created}};
  }
  if (op == "delete_part") {
    delete_part(t, codec::cell_path_from_json(field(body, "split")), field(body, "index").get<std::size_t>());
    return json::object();
  }
  if (op == "insert_record") {
    insert_record(t, field(body, "at").get<std::size_t>());
    return json::object();
  }
  if (op == "delete_record") {
    delete_record(t, field(body, "index").get<std::size_t>());
    return json::object();
  }
  if (op == "fill") {
    const auto c = field(body, "catalog").get<std::size_t>();
    const auto i = field(body, "item").get<std::size_t>();
    const auto& store = ws.catalogs();
    if (c >= store.catalogs.size() || i >= store.catalogs[c].items.size()) throw BadRequest("no such catalog item");
    auto props = apply_rules(ws.rules(), store.catalogs[c], store.catalogs[c].items[i]);
    return json{{"ignored", fill_cells(t, codec::cell_path_from_json(field(body, "row")), props)}};
  }
  if (op == "autofill") {
    CollectionScope scope;
    scope.files = field(body, "files").get<std::vector<std::string>>();
    if (body.contains("types")) {
      for (const auto& s : body["types"].get<std::vector<std::string>>()) scope.element_types.insert(s);
    }
    for (const auto& f : scope.files) {
      if (f.find("..") != std::string::npos) throw BadRequest("file names may not contain '..'");
    }
    auto report = autofill(t, collect(scope, directory_loader(ws.data_dir().empty() ? "." : ws.data_dir())));
    json rows = json::array();
    for (const auto& p : report.rows) rows.push_back(codec::to_json(p));
    return json{{"rows", rows}, {"dropped", report.dropped}};
  }
  throw BadRequest("unknown op '" + op + "'");
}

Response route(Workspace& ws, const Request& r) {
  const auto parts = split_path(r.path);
  const auto& m = r.method;

  if (parts.size() == 1 && parts[0] == "doc" && m == "POST") {
    const auto body = parse_body(r);
    auto id = ws.open(module_from_body(ws, body));
    return reply(201, mutation_reply(ws.get(id)));
  }
  if (parts.size() == 2 && parts[0] == "doc" && m == "GET") return reply(200, document_reply(ws.get(parts[1])));

  if (parts.size() == 3 && parts[0] == "doc") {
    const std::string& id = parts[1];
    const std::string& action = parts[2];
    if (action == "render" && m == "GET") {
      auto snap = ws.get(id);
      std::string fmt = r.query.count("fmt") ? r.query.at("fmt") : "svg";
      if (fmt != "svg" && fmt != "text") throw BadRequest("fmt must be svg or text");
      if (fmt == "text") return {200, "text/plain; charset=utf-8", render_text(*snap.table)};
      if (r.query.count("height")) {
        auto opts = paginate_options(snap.table->continuation);
        std::vector<LayoutTree> pages;
        for (const auto& s : paginate(*snap.table, query_number(r, "height"), opts)) {
          pages.push_back(layout_segment(*snap.table, s));
        }
        return {200, "image/svg+xml", render_svg(pages)};
      }
      return {200, "image/svg+xml", render_svg(*snap.table)};
    }
    if (action == "paginate" && m == "GET") {
      auto snap = ws.get(id);
      auto opts = paginate_options(snap.table->continuation);
      if (r.query.count("first_number")) opts.first_number = static_cast<int>(query_number(r, "first_number"));
      if (r.query.count("numbers")) opts.number_row = r.query.at("numbers") != "false";
      json segs = json::array();
      for (const auto& s : paginate(*snap.table, query_number(r, "height"), opts)) segs.push_back(codec::to_json(s));
      return reply(200, json{{"segments", segs}});
    }
    if (action == "hit" && m == "GET") {
      auto snap = ws.get(id);
      CellPath p = hit_test(*snap.table, {query_number(r, "x"), query_number(r, "y")});
      const auto& node = template_node_at(snap.table->tmpl, p.steps);
      json out{{"path", codec::to_json(p)}, {"leaf", node.is_leaf()}, {"header", p.record == 0}};
      if (node.is_leaf() && !node.object_class.empty()) {
        out["object_class"] = node.object_class;
        out["constraints"] = codec::to_json(gather_constraints(*snap.table, p));
      }
      return reply(200, out);
    }
    if (action == "copy-buffer" && m == "POST") {
      const auto body = parse_body(r);
      auto snap = ws.get(id);
      auto buffer = copy_to_buffer(*snap.table, codec::row_range_from_json(*snap.table, field(body, "range")));
      ws.set_buffer(buffer);
      return reply(200, codec::to_json(buffer));
    }
    if (m != "POST") return reply(404, json{{"error", "not-found"}, {"message", "no route"}});
    const auto body = parse_body(r);
    const auto revision = revision_of(body);
    if (action == "cell") {
      const CellPath path = codec::cell_path_from_json(field(body, "path"));
      const CellValue value = codec::cell_value_from_json(field(body, "value"));
      return reply(200, mutation_reply(ws.mutate(id, revision, [&](TableModule& t) { set_cell(t, path, value); })));
    }
    if (action == "insert-at-point") {
      const Point p{field(body, "x").get<double>(), field(body, "y").get<double>()};
      json created = json::array();
      auto snap = ws.mutate(id, revision, [&](TableModule& t) {
        for (const auto& c : insert_at_point(t, p).created) created.push_back(codec::to_json(c));
      });
      return reply(200, mutation_reply(snap, json{{"created", created}}));
    }
    if (action == "op") {
      json result;
      auto snap = ws.mutate(id, revision, [&](TableModule& t) { result = run_op(ws, t, body); });
      return reply(200, mutation_reply(snap, json{{"result", result}}));
    }
    if (action == "paste-buffer") {
      const auto list = codec::row_list_from_json(body.value("list", json(nullptr)));
      std::optional<std::size_t> after;
      if (body.contains("after") && !body["after"].is_null()) after = body["after"].get<std::size_t>();
      const ItemBuffer buffer = body.contains("buffer") ? codec::item_buffer_from_json(body["buffer"]) : ws.buffer();
      PasteReport report;
      auto snap = ws.mutate(id, revision, [&](TableModule& t) { report = paste_from_buffer(buffer, t, list, after); });
      json rows = json::array();
      for (const auto& p : report.rows) rows.push_back(codec::to_json(p));
      return reply(200, mutation_reply(snap, json{{"rows", rows}, {"dropped", report.dropped}}));
    }
  }

  if (parts.size() == 1 && parts[0] == "buffer") {
    if (m == "GET") return reply(200, codec::to_json(ws.buffer()));
    if (m == "PUT") {
      const auto body = parse_body(r);
      ws.set_buffer(body.contains("tkb") ? load_buffer(body["tkb"].get<std::string>())
                                         : codec::item_buffer_from_json(body));
      return reply(200, codec::to_json(ws.buffer()));
    }
  }
  if (parts.size() == 2 && parts[0] == "catalogs" && parts[1] == "query" && m == "GET") return catalog_query(ws, r);

  throw NotFound{"no route for " + m + " " + r.path};
}

}  // namespace

Response handle(Workspace& ws, const Request& request) {
  try {
    return route(ws, request);
  } catch (const UnknownDocument& e) {
    return reply(404, json{{"error", "unknown-document"}, {"message", "no document '" + e.id + "'"}});
  } catch (const NotFound& e) {
    return reply(404, json{{"error", "not-found"}, {"message", e.what}});
  } catch (const StaleRevision& e) {
    return reply(409, json{{"error", "stale-revision"}, {"revision", e.current}});
  } catch (const BadRequest& e) {
    return reply(400, json{{"error", "bad-request"}, {"message", e.what()}});
  } catch (const nlohmann::json::exception& e) {
    return reply(400, json{{"error", "bad-request"}, {"message", e.what()}});
  } catch (const Error& e) {
    return reply(422, codec::to_json(e));
  }
}

struct Server::Impl {
  httplib::Server server;
};

Server::Server(Workspace& ws) : impl_(std::make_unique<Impl>()) {
  auto bridge = [&ws](const httplib::Request& req, httplib::Response& res) {
    Request r{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.params) r.query[k] = v;
    Response out = handle(ws, r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  impl_->server.Get(".*", bridge);
  impl_->server.Post(".*", bridge);
  impl_->server.Put(".*", bridge);
}

Server::~Server() = default;

int Server::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Server::run() { return impl_->server.listen_after_bind(); }

void Server::stop() { impl_->server.stop(); }

bool serve(Workspace& ws, const std::string& host, int port) {
  Server server(ws);
  if (server.bind(host, port) < 0) return false;
  return server.run();
}

}  // namespace tkd::http
