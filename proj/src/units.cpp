#include "tkd/units.hpp"

#include "tkd/error.hpp"
#include "tkd/text_util.hpp"

namespace tkd {

std::string_view dimension_name(Dimension d) {
  switch (d) {
    case Dimension::pressure: return "pressure";
    case Dimension::temperature: return "temperature";
    case Dimension::length: return "length";
    case Dimension::mass: return "mass";
    case Dimension::count: return "count";
  }
  return "?";
}

const UnitRegistry& UnitRegistry::standard() {
  static const UnitRegistry registry = [] {
    UnitRegistry r;
    constexpr double kgf_per_cm2 = 98066.5;  // Pa, by definition of kgf
    constexpr double m_water = 9806.65;      // Pa, conventional metre of water
    r.add("Па", {Dimension::pressure, 1.0});
    r.add("Pa", {Dimension::pressure, 1.0});
    r.add("кПа", {Dimension::pressure, 1e3});
    r.add("kPa", {Dimension::pressure, 1e3});
    r.add("МПа", {Dimension::pressure, 1e6});
    r.add("MPa", {Dimension::pressure, 1e6});
    r.add("бар", {Dimension::pressure, 1e5});
    r.add("bar", {Dimension::pressure, 1e5});
    r.add("кгс/см²", {Dimension::pressure, kgf_per_cm2});
    r.add("кгс/см2", {Dimension::pressure, kgf_per_cm2});
    r.add("м вод.ст.", {Dimension::pressure, m_water});
    r.add("мм вод.ст.", {Dimension::pressure, m_water / 1000.0});

    r.add("°C", {Dimension::temperature, 1.0});
    r.add("C", {Dimension::temperature, 1.0});
    r.add("K", {Dimension::temperature, 1.0, -273.15});
    r.add("°F", {Dimension::temperature, 5.0 / 9.0, -32.0 * 5.0 / 9.0});

    r.add("мм", {Dimension::length, 1.0});
    r.add("mm", {Dimension::length, 1.0});
    r.add("см", {Dimension::length, 10.0});
    r.add("cm", {Dimension::length, 10.0});
    r.add("м", {Dimension::length, 1000.0});
    r.add("m", {Dimension::length, 1000.0});

    r.add("кг", {Dimension::mass, 1.0});
    r.add("kg", {Dimension::mass, 1.0});
    r.add("г", {Dimension::mass, 1e-3});
    r.add("g", {Dimension::mass, 1e-3});
    r.add("т", {Dimension::mass, 1e3});
    r.add("t", {Dimension::mass, 1e3});

    r.add("шт", {Dimension::count, 1.0});
    r.add("шт.", {Dimension::count, 1.0});
    return r;
  }();
  return registry;
}

void UnitRegistry::add(std::string symbol, UnitDef def) { units_[std::move(symbol)] = def; }

bool UnitRegistry::contains(std::string_view symbol) const {
  return units_.find(symbol) != units_.end();
}

const UnitDef& UnitRegistry::lookup(std::string_view symbol) const {
  auto it = units_.find(symbol);
  if (it == units_.end()) {
    throw Error(ErrorCode::unknown_unit, "unknown unit '" + std::string(symbol) + "'");
  }
  return it->second;
}

std::optional<Dimension> UnitRegistry::dimension_of(std::string_view symbol) const {
  auto it = units_.find(symbol);
  if (it == units_.end()) return std::nullopt;
  return it->second.dimension;
}

double UnitRegistry::to_base(double value, std::string_view unit) const {
  const auto& u = lookup(unit);
  return value * u.factor + u.offset;
}

double UnitRegistry::convert(double value, std::string_view from, std::string_view to) const {
  const auto& a = lookup(from);
  const auto& b = lookup(to);
  if (a.dimension != b.dimension) {
    throw Error(ErrorCode::dimension_mismatch,
                "cannot convert " + std::string(dimension_name(a.dimension)) + " '" +
                    std::string(from) + "' to " + std::string(dimension_name(b.dimension)) +
                    " '" + std::string(to) + "'");
  }
  if (from == to) return value;
  return (value * a.factor + a.offset - b.offset) / b.factor;
}

std::pair<double, std::string> parse_quantity(std::string_view literal) {
  std::string s = text::trim(literal);
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  while (i < s.size()) {
    char ch = s[i];
    bool digit = ch >= '0' && ch <= '9';
    bool exp = (ch == 'e' || ch == 'E') && i + 1 < s.size() &&
               ((s[i + 1] >= '0' && s[i + 1] <= '9') || s[i + 1] == '-' || s[i + 1] == '+');
    if (digit || ch == '.' || ch == ',') {
      ++i;
    } else if (exp) {
      i += 2;
    } else {
      break;
    }
  }
  auto number = text::parse_number(s.substr(0, i));
  if (!number) {
    throw Error(ErrorCode::invalid_value, "not a quantity: '" + std::string(literal) + "'");
  }
  std::string unit = text::trim(s.substr(i));
  if (!unit.empty()) UnitRegistry::standard().lookup(unit);
  return {*number, unit};
}

}  // namespace tkd
