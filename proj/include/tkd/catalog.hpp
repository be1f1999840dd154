#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tkd/model.hpp"

namespace tkd {

/// property_id -> value. Blank values are kept so that a row's full
/// property set survives transfer.
using PropertySet = std::map<int, CellValue>;

struct CatalogField {
  std::string name;
  std::optional<int> property_id;
  std::string unit;

  bool operator==(const CatalogField&) const = default;
};

/// Inclusive bounds; a missing side is open.
struct Range {
  std::optional<double> lo;
  std::optional<double> hi;

  bool contains(double v) const { return (!lo || *lo <= v) && (!hi || v <= *hi); }
  bool operator==(const Range&) const = default;
};

struct Applicability {
  std::optional<Range> temperature;  // in Catalog::temperature_unit
  std::optional<Range> pressure;     // in Catalog::pressure_unit
  std::optional<std::vector<int>> dn;

  bool operator==(const Applicability&) const = default;
};

struct CatalogItem {
  std::vector<CellValue> values;  // parallel to Catalog::fields
  Applicability applicability;
  int line = 0;

  bool operator==(const CatalogItem&) const = default;
};

struct Catalog {
  std::string object_class;
  std::vector<CatalogField> fields;
  std::string temperature_unit = "°C";
  std::string pressure_unit = "МПа";
  std::vector<CatalogItem> items;

  std::optional<std::size_t> field_index(std::string_view name) const;
};

/// Parses a `.cat` file:
///
///   catalog := "class" STRING NL (decl NL)* "items" NL (item NL)*
///   decl    := "field" NAME ("prop" INT)? ("unit" STRING)?
///            | "range" ("t" | "p") "unit" STRING
///   item    := value+ (":" limit+)?
///   limit   := ("t" | "p") NUMBER? ".." NUMBER? | "dn" INT ("," INT)*
///
/// Throws syntax-error, unknown-unit, duplicate-property (positioned).
Catalog load_catalog(std::string_view text);

struct PropertyRule {
  int property_id = 0;
  std::string template_text;  // "{field}" placeholders, "{{" for a brace
  std::string unit;
  std::string object_class;  // empty: applies to every catalog

  bool operator==(const PropertyRule&) const = default;
};

struct PropertyRules {
  std::vector<PropertyRule> rules;
};

/// Parses a `.rules` file:
///
///   rules := (("class" STRING | "rule" INT "=" STRING ("unit" STRING)?) NL)*
///
/// A class line scopes the rules that follow it. Throws syntax-error,
/// unknown-unit, duplicate-property.
PropertyRules load_rules(std::string_view text);

/// All catalogs known to a session; immutable after loading.
struct CatalogStore {
  std::vector<Catalog> catalogs;
};

struct Quantity {
  double value = 0.0;
  std::string unit;

  bool operator==(const Quantity&) const = default;
};

struct ConstraintSet {
  std::optional<Quantity> temperature;
  std::optional<Quantity> pressure;
  std::optional<int> dn;

  bool empty() const { return !temperature && !pressure && !dn; }
  bool operator==(const ConstraintSet&) const = default;
};

/// Reads constraint values for the subject cell from source leaves of the
/// same record that are not inside a part of an arbitrary split the subject
/// does not belong to. The constraint kind follows the source leaf's unit:
/// pressure, temperature, anything else is a nominal diameter. When several
/// sources of one kind qualify, the one nearest the subject wins.
ConstraintSet gather_constraints(const TableModule& table, const CellPath& subject);

/// True when the item accepts every constraint present in the set.
/// Throws dimension-mismatch / unknown-unit for ill-formed constraints.
bool item_matches(const Catalog& catalog, const CatalogItem& item, const ConstraintSet& constraints);

struct CatalogMatch {
  std::size_t catalog = 0;  // index into the store
  std::size_t item = 0;

  bool operator==(const CatalogMatch&) const = default;
};

/// Items of every catalog of `object_class` that accept the constraints,
/// in store order. Throws unknown-object-class.
std::vector<CatalogMatch> query(const CatalogStore& store, std::string_view object_class,
                                const ConstraintSet& constraints);

/// Specifying properties of one item: one per applicable rule, plus every
/// field bound to a property without a rule. Throws unresolved-placeholder.
PropertySet apply_rules(const PropertyRules& rules, const Catalog& catalog, const CatalogItem& item);

/// Writes each property into the first leaf of the row carrying that
/// property_id, converting units. Returns the ids with no such leaf.
/// `row` addresses a record or one part of an arbitrary split.
/// Throws unit-dimension-mismatch.
std::vector<int> fill_cells(TableModule& table, const CellPath& row, const PropertySet& properties);

}  // namespace tkd
