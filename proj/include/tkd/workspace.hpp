#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "tkd/catalog.hpp"
#include "tkd/item_buffer.hpp"
#include "tkd/model.hpp"

namespace tkd {

struct Snapshot {
  std::string id;
  std::uint64_t revision = 0;
  std::shared_ptr<const TableModule> table;
};

/// Raised when a mutation names a revision other than the current one.
struct StaleRevision {
  std::uint64_t current = 0;
};

/// Raised for an unknown document id.
struct UnknownDocument {
  std::string id;
};

/// Open documents with optimistic revision control, plus the session's
/// catalogs, rules, drawing directory and item buffer.
class Workspace {
 public:
  explicit Workspace(std::string data_dir = {});

  /// Loads `*.cat` and `*.rules` files from the data directory.
  void load_catalogs();

  const std::string& data_dir() const { return data_dir_; }
  const CatalogStore& catalogs() const { return catalogs_; }
  const PropertyRules& rules() const { return rules_; }
  void set_catalogs(CatalogStore store, PropertyRules rules);

  std::string open(TableModule table);
  /// Throws UnknownDocument.
  Snapshot get(const std::string& id) const;

  /// Applies `fn` to a copy of the document; on success the copy replaces
  /// the document and the revision is incremented. Throws UnknownDocument,
  /// StaleRevision, or whatever `fn` throws (the document is unchanged).
  Snapshot mutate(const std::string& id, std::uint64_t expected_revision, const std::function<void(TableModule&)>& fn);

  ItemBuffer buffer() const;
  void set_buffer(ItemBuffer buffer);

 private:
  struct Document {
    std::uint64_t revision = 0;
    std::shared_ptr<const TableModule> table;
    std::mutex write;
  };

  std::shared_ptr<Document> find(const std::string& id) const;

  std::string data_dir_;
  CatalogStore catalogs_;
  PropertyRules rules_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Document>> docs_;
  std::uint64_t next_id_ = 1;
  ItemBuffer buffer_;
};

}  // namespace tkd
