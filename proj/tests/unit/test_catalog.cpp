#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "generators.hpp"
#include "tkd/catalog.hpp"

using namespace tkd;
using namespace tkd::testing;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::invalid_value;
}

CatalogStore pipe_store() {
  CatalogStore s;
  s.catalogs.push_back(load_catalog(read_fixture("pipes.cat")));
  s.catalogs.push_back(load_catalog(read_fixture("pipes_kgf.cat")));
  s.catalogs.push_back(load_catalog(read_fixture("flanges.cat")));
  return s;
}

// Oracle: pressures in Pa, temperatures in kelvin, own factor table.
double to_pa(double v, const std::string& u) {
  if (u == "МПа") return v * 1e6;
  if (u == "кПа") return v * 1e3;
  if (u == "бар") return v * 1e5;
  if (u == "кгс/см²") return v * 98066.5;
  if (u == "Па") return v;
  throw std::runtime_error("oracle: " + u);
}

double to_k(double v, const std::string& u) {
  if (u == "°C") return v + 273.15;
  if (u == "K") return v;
  throw std::runtime_error("oracle: " + u);
}

bool inside(const std::optional<Range>& r, double v, double (*conv)(double, const std::string&), const std::string& u) {
  if (!r) return true;
  const double eps = 1e-6 * std::max(1.0, std::fabs(v));
  if (r->lo && conv(*r->lo, u) > v + eps) return false;
  if (r->hi && conv(*r->hi, u) < v - eps) return false;
  return true;
}

bool oracle_matches(const Catalog& cat, const CatalogItem& item, const ConstraintSet& c) {
  const auto& a = item.applicability;
  if (c.temperature && !inside(a.temperature, to_k(c.temperature->value, c.temperature->unit), to_k, cat.temperature_unit))
    return false;
  if (c.pressure && !inside(a.pressure, to_pa(c.pressure->value, c.pressure->unit), to_pa, cat.pressure_unit))
    return false;
  if (c.dn && a.dn && std::find(a.dn->begin(), a.dn->end(), *c.dn) == a.dn->end()) return false;
  return true;
}

std::string random_catalog_text(Rng& rng, const std::string& p_unit, const std::string& t_unit) {
  std::string out = "class \"X\"\nfield name prop 3\nrange p unit \"" + p_unit + "\"\nrange t unit \"" + t_unit +
                    "\"\nitems\n";
  const int n = 1 + static_cast<int>(rng() % 12);
  for (int i = 0; i < n; ++i) {
    out += "\"item " + std::to_string(i) + "\"";
    std::string limits;
    if (rng() % 3) {
      const int lo = static_cast<int>(rng() % 10), hi = lo + static_cast<int>(rng() % 40);
      limits += rng() % 2 ? " p " + std::to_string(lo) + ".." + std::to_string(hi) : " p .." + std::to_string(hi);
    }
    if (rng() % 3) {
      const int lo = static_cast<int>(rng() % 200) - 50, hi = lo + static_cast<int>(rng() % 400);
      limits += " t " + std::to_string(lo) + ".." + std::to_string(hi);
    }
    if (rng() % 2) limits += " dn " + std::to_string(25 * (1 + rng() % 4)) + "," + std::to_string(25 * (5 + rng() % 4));
    if (!limits.empty()) out += " :" + limits;
    out += "\n";
  }
  return out;
}

}  // namespace

TEST_SUITE("catalog") {
  TEST_CASE("fixture catalogs load") {
    auto store = pipe_store();
    const auto& pipes = store.catalogs[0];
    CHECK(pipes.object_class == "Трубы");
    CHECK(pipes.items.size() == 14);
    CHECK(pipes.fields.size() == 5);
    CHECK(*pipes.fields[4].property_id == 5);
    CHECK(pipes.fields[4].unit == "кг");
    const auto& first = pipes.items[0].applicability;
    CHECK(*first.pressure->hi == 1.0);
    CHECK_FALSE(first.pressure->lo);
    CHECK(*first.temperature->lo == -30);
    CHECK(*first.dn == std::vector<int>{50});
    CHECK(pipes.items[12].applicability.dn->size() == 2);
    CHECK_FALSE(pipes.items[13].applicability.pressure);
    CHECK(store.catalogs[1].pressure_unit == "кгс/см²");
  }

  TEST_CASE("query converts constraint units into the catalog units") {
    auto store = pipe_store();
    ConstraintSet c;
    c.pressure = Quantity{1.6, "МПа"};
    c.temperature = Quantity{80, "°C"};
    c.dn = 50;
    auto matches = query(store, "Трубы", c);
    std::vector<CatalogMatch> expect = {{0, 1}, {0, 13}, {1, 1}};
    CHECK(matches == expect);

    // 16 кгс/см² is about 1.569 МПа: within ..1.6, above ..1.0
    c.pressure = Quantity{16, "кгс/см²"};
    c.dn = 100;
    expect = {{0, 6}, {0, 7}, {0, 13}};
    CHECK(query(store, "Трубы", c) == expect);

    // temperature in kelvin: 353.15 K == 80 °C
    c.temperature = Quantity{353.15, "K"};
    CHECK(query(store, "Трубы", c) == expect);

    // inclusive bound reached through a conversion
    ConstraintSet edge;
    edge.pressure = Quantity{10, "бар"};
    edge.dn = 50;
    auto at_edge = query(store, "Трубы", edge);
    CHECK(std::find(at_edge.begin(), at_edge.end(), CatalogMatch{0, 0}) != at_edge.end());
  }

  TEST_CASE("query errors") {
    auto store = pipe_store();
    CHECK(code_of([&] { query(store, "Арматура", {}); }) == ErrorCode::unknown_object_class);
    ConstraintSet wrong;
    wrong.pressure = Quantity{80, "°C"};
    CHECK(code_of([&] { query(store, "Трубы", wrong); }) == ErrorCode::dimension_mismatch);
    CHECK(query(store, "Трубы", {}).size() == 17);
  }

  TEST_CASE("query agrees with the brute-force oracle") {
    Rng rng(71);
    const std::vector<std::string> p_units = {"МПа", "кгс/см²", "бар", "кПа"};
    const std::vector<std::string> t_units = {"°C", "K"};
    int compared = 0;
    for (int i = 0; i < 200; ++i) {
      CatalogStore store;
      for (int k = 0; k < 3; ++k) {
        store.catalogs.push_back(load_catalog(
            random_catalog_text(rng, p_units[rng() % p_units.size()], t_units[rng() % t_units.size()])));
      }
      for (int q = 0; q < 20; ++q) {
        ConstraintSet c;
        if (rng() % 4) c.pressure = Quantity{static_cast<double>(rng() % 45), p_units[rng() % p_units.size()]};
        if (rng() % 4) c.temperature = Quantity{static_cast<double>(rng() % 500) - 60, t_units[rng() % 2]};
        if (rng() % 2) c.dn = static_cast<int>(25 * (1 + rng() % 8));
        std::vector<CatalogMatch> expect;
        for (std::size_t s = 0; s < store.catalogs.size(); ++s) {
          for (std::size_t it = 0; it < store.catalogs[s].items.size(); ++it) {
            if (oracle_matches(store.catalogs[s], store.catalogs[s].items[it], c)) expect.push_back({s, it});
          }
        }
        CHECK(query(store, "X", c) == expect);
        ++compared;
      }
    }
    CHECK(compared == 4000);
  }

  TEST_CASE("catalog parse errors") {
    auto code = [](const std::string& text) { return code_of([&] { load_catalog(text); }); };
    CHECK(code("class \"X\"\nfield a\nitems\n1 2\n") == ErrorCode::syntax_error);
    CHECK(code("class \"X\"\nfield a prop 3\nfield b prop 3\nitems\n") == ErrorCode::duplicate_property);
    CHECK(code("class \"X\"\nfield a unit \"psi\"\nitems\n") == ErrorCode::unknown_unit);
    CHECK(code("class \"X\"\nrange p unit \"°C\"\nfield a\nitems\n") == ErrorCode::dimension_mismatch);
    CHECK(code("class \"X\"\nfield a\nitems\n1 : p 5..2\n") == ErrorCode::syntax_error);
    try {
      load_catalog("class \"X\"\nfield a\nitems\n1\n1 2\n");
    } catch (const Error& e) {
      REQUIRE(e.pos());
      CHECK(e.pos()->line == 5);
    }
  }

  TEST_CASE("rules produce the specifying properties") {
    auto store = pipe_store();
    auto rules = load_rules(read_fixture("pipes.rules"));
    auto props = apply_rules(rules, store.catalogs[0], store.catalogs[0].items[0]);
    REQUIRE(props.size() == 2);
    CHECK(props[3].text == "Труба 57×3.5 ГОСТ 10704-91");
    CHECK(*props[5].numeric == doctest::Approx(4.62));
    CHECK(props[5].unit == "кг");

    auto flange = apply_rules(rules, store.catalogs[2], store.catalogs[2].items[1]);
    CHECK(flange[3].text == "Фланец 80-16 ГОСТ 12820-80");

    // no rule: bound fields pass through
    auto bare = apply_rules(PropertyRules{}, store.catalogs[0], store.catalogs[0].items[0]);
    CHECK(bare[3].text == "Труба электросварная");
    CHECK(*bare[5].numeric == doctest::Approx(4.62));
  }

  TEST_CASE("rule placeholders and units") {
    auto cat = load_catalog("class \"X\"\nfield m unit \"кг\"\nfield n\nitems\n1.5 \"a\"\n");
    auto grams = load_rules("rule 5 = \"{m}\" unit \"г\"\nrule 3 = \"{{{n}}}\"\n");
    auto props = apply_rules(grams, cat, cat.items[0]);
    CHECK(*props[5].numeric == doctest::Approx(1500));
    CHECK(props[5].unit == "г");
    CHECK(props[3].text == "{a}");

    auto missing = load_rules("rule 3 = \"{nope}\"\n");
    CHECK(code_of([&] { apply_rules(missing, cat, cat.items[0]); }) == ErrorCode::unresolved_placeholder);
    auto open = load_rules("rule 3 = \"{n\"\n");
    CHECK(code_of([&] { apply_rules(open, cat, cat.items[0]); }) == ErrorCode::unresolved_placeholder);
    CHECK(code_of([&] { load_rules("rule 3 = \"a\"\nrule 3 = \"b\"\n"); }) == ErrorCode::duplicate_property);
    CHECK(code_of([&] { load_rules("rule 3 = \"a\" unit \"psi\"\n"); }) == ErrorCode::unknown_unit);
  }

  TEST_CASE("constraints come from the record of the subject") {
    TableModule t = fixture_table("pipeline.tks");
    insert_record(t, 1);
    insert_part(t, parse_cell_path("1:1"), 0);
    insert_part(t, parse_cell_path("1:1"), 1);
    set_cell(t, parse_cell_path("1:0.1"), CellValue::from_number(16, "кгс/см²"));
    set_cell(t, parse_cell_path("1:0.2"), CellValue::from_number(80, "°C"));
    set_cell(t, parse_cell_path("1:1.0.0"), CellValue::from_text("50"));
    set_cell(t, parse_cell_path("1:1.1.0"), CellValue::from_text("100"));

    auto c0 = gather_constraints(t, parse_cell_path("1:1.0.1"));
    REQUIRE(c0.pressure);
    CHECK(c0.pressure->unit == "МПа");
    CHECK(c0.pressure->value == doctest::Approx(1.569064));
    CHECK(c0.temperature->value == 80);
    CHECK(*c0.dn == 50);
    CHECK(*gather_constraints(t, parse_cell_path("1:1.1.1")).dn == 100);

    auto store = pipe_store();
    auto matches = query(store, "Трубы", c0);
    std::vector<CatalogMatch> expect = {{0, 1}, {0, 13}, {1, 1}};
    CHECK(matches == expect);

    // a second record does not see the first one's sources
    insert_record(t, 2);
    insert_part(t, parse_cell_path("2:1"), 0);
    CHECK(gather_constraints(t, parse_cell_path("2:1.0.1")).empty());
  }

  TEST_CASE("fill_cells writes matching graphs and reports the rest") {
    auto store = pipe_store();
    auto rules = load_rules(read_fixture("pipes.rules"));
    auto props = apply_rules(rules, store.catalogs[0], store.catalogs[0].items[0]);

    TableModule t = fixture_table("pipeline.tks");
    insert_record(t, 1);
    insert_part(t, parse_cell_path("1:1"), 0);
    auto ignored = fill_cells(t, parse_cell_path("1:1.0"), props);
    CHECK(ignored.empty());
    CHECK(resolve_cell(t, parse_cell_path("1:1.0.1")).text == "Труба 57×3.5 ГОСТ 10704-91");
    CHECK(*resolve_cell(t, parse_cell_path("1:1.0.3")).numeric == doctest::Approx(4.62));

    TableModule ex = fixture_table("explication.tks");
    insert_record(ex, 1);
    ignored = fill_cells(ex, CellPath{1, {}}, props);
    CHECK(ignored == std::vector<int>{5});

    PropertySet grams{{5, CellValue::from_number(4620, "г")}};
    fill_cells(t, parse_cell_path("1:1.0"), grams);
    const auto mass = resolve_cell(t, parse_cell_path("1:1.0.3"));
    CHECK(*mass.numeric == doctest::Approx(4.62));
    CHECK(mass.unit == "кг");

    PropertySet wrong{{3, CellValue::from_text("x")}, {5, CellValue::from_number(1, "МПа")}};
    const auto before = t;
    CHECK(code_of([&] { fill_cells(t, parse_cell_path("1:1.0"), wrong); }) == ErrorCode::unit_dimension_mismatch);
    CHECK(t == before);
  }
}
