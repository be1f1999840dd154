#include "tkd/workspace.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace tkd {

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::file_not_found, "cannot open '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Workspace::Workspace(std::string data_dir) : data_dir_(std::move(data_dir)) {}

void Workspace::load_catalogs() {
  namespace fs = std::filesystem;
  CatalogStore store;
  PropertyRules rules;
  if (!data_dir_.empty() && fs::is_directory(data_dir_)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(data_dir_)) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      try {
        if (f.extension() == ".cat") {
          store.catalogs.push_back(load_catalog(read_file(f)));
        } else if (f.extension() == ".rules") {
          auto more = load_rules(read_file(f));
          rules.rules.insert(rules.rules.end(), more.rules.begin(), more.rules.end());
        }
      } catch (const Error& e) {
        throw Error(e.code(), f.filename().string() + ": " + e.message(), e.pos());
      }
    }
  }
  set_catalogs(std::move(store), std::move(rules));
}

void Workspace::set_catalogs(CatalogStore store, PropertyRules rules) {
  std::lock_guard lock(mutex_);
  catalogs_ = std::move(store);
  rules_ = std::move(rules);
}

std::string Workspace::open(TableModule table) {
  auto doc = std::make_shared<Document>();
  doc->table = std::make_shared<const TableModule>(std::move(table));
  std::lock_guard lock(mutex_);
  std::string id = "d" + std::to_string(next_id_++);
  docs_[id] = std::move(doc);
  return id;
}

std::shared_ptr<Workspace::Document> Workspace::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = docs_.find(id);
  if (it == docs_.end()) throw UnknownDocument{id};
  return it->second;
}

Snapshot Workspace::get(const std::string& id) const {
  auto doc = find(id);
  std::lock_guard lock(doc->write);
  return {id, doc->revision, doc->table};
}

Snapshot Workspace::mutate(const std::string& id, std::uint64_t expected_revision,
                           const std::function<void(TableModule&)>& fn) {
  auto doc = find(id);
  std::lock_guard lock(doc->write);
  if (doc->revision != expected_revision) throw StaleRevision{doc->revision};
  auto next = std::make_shared<TableModule>(*doc->table);
  fn(*next);
  doc->table = std::move(next);
  ++doc->revision;
  return {id, doc->revision, doc->table};
}

ItemBuffer Workspace::buffer() const {
  std::lock_guard lock(mutex_);
  return buffer_;
}

void Workspace::set_buffer(ItemBuffer buffer) {
  std::lock_guard lock(mutex_);
  buffer_ = std::move(buffer);
}

}  // namespace tkd
