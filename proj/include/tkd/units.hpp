#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace tkd {

enum class Dimension { pressure, temperature, length, mass, count };

std::string_view dimension_name(Dimension d);

/// value_in_base = value * factor + offset
struct UnitDef {
  Dimension dimension;
  double factor;
  double offset = 0.0;
};

/// Symbol table of measurement units. Bases: Pa, °C, mm, kg, шт.
class UnitRegistry {
 public:
  /// Registry preloaded with the pressure/temperature/length/mass units
  /// found in piping catalogs (МПа, кгс/см², м вод.ст., °C, ...).
  static const UnitRegistry& standard();

  void add(std::string symbol, UnitDef def);
  bool contains(std::string_view symbol) const;
  /// Throws unknown-unit.
  const UnitDef& lookup(std::string_view symbol) const;
  std::optional<Dimension> dimension_of(std::string_view symbol) const;

  /// Throws unknown-unit or dimension-mismatch.
  double convert(double value, std::string_view from, std::string_view to) const;
  double to_base(double value, std::string_view unit) const;

 private:
  std::map<std::string, UnitDef, std::less<>> units_;
};

inline double convert(double value, std::string_view from, std::string_view to) {
  return UnitRegistry::standard().convert(value, from, to);
}

/// Splits a quantity literal such as "1.6МПа", "80C" or "10 м вод.ст."
/// into its numeric part and unit symbol. Throws invalid-value / unknown-unit.
std::pair<double, std::string> parse_quantity(std::string_view literal);

}  // namespace tkd
