#include <doctest.h>

#include <algorithm>
#include <map>

#include "fixtures.hpp"
#include "generators.hpp"
#include "tkd/spec_pipeline.hpp"
#include "tkd/text_util.hpp"

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

std::vector<CollectedEntry> fixture_entries(std::set<std::string> types = {"axonometric"}) {
  CollectionScope scope{{"axon_k1", "axon_k2"}, std::move(types)};
  return collect(scope, directory_loader(fixture_path("drawings")));
}

// name text -> total quantity
std::map<std::string, double> totals(const std::vector<CollectedEntry>& entries) {
  std::map<std::string, double> out;
  for (const auto& e : entries) out[e.properties.at(3).text] += e.quantity;
  return out;
}

TableModule spec_rows(const std::vector<std::vector<std::string>>& rows) {
  TableModule t = fixture_table("spec.tks");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    insert_record(t, r + 1);
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (!rows[r][c].empty()) set_cell(t, CellPath{r + 1, {c}}, CellValue::from_text(rows[r][c]));
    }
  }
  return t;
}

std::string cell(const TableModule& t, std::size_t r, std::size_t c) { return resolve_cell(t, CellPath{r, {c}}).text; }

}  // namespace

TEST_SUITE("spec_pipeline") {
  TEST_CASE("drawing files parse") {
    auto d = load_drawing(read_fixture("drawings/axon_k1.dwgp"), "axon_k1");
    REQUIRE(d.elements.size() == 4);
    CHECK(d.elements[0].element_type == "axonometric");
    CHECK(d.elements[0].quantity == 4);
    CHECK(*d.elements[0].properties[5].numeric == doctest::Approx(4.62));
    CHECK(d.elements[0].properties[5].unit == "кг");
    CHECK(d.elements[2].properties[7].text == "Q=12 м3/ч");
    CHECK(d.elements[0].line == 2);
  }

  TEST_CASE("drawing parse errors") {
    try {
      load_drawing("element axonometric qty 1 {\n  prop 3 = \"a\"\n}\nelement elevation qty 1 {\n}\n");
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::unknown_element_type);
      CHECK(e.pos()->line == 4);
    }
    auto code = [](const std::string& text) { return code_of([&] { load_drawing(text); }); };
    CHECK(code("element axonometric {\n prop 3 = \"a\"\n}\n") == ErrorCode::syntax_error);
    CHECK(code("element axonometric qty 1 {\n prop 3 = \"a\"\n prop 3 = \"b\"\n}\n") == ErrorCode::duplicate_property);
    CHECK(code("element axonometric qty 1 {\n prop 5 = 2 \"pound\"\n}\n") == ErrorCode::unknown_unit);
    CHECK(code("element axonometric qty 1 {\n prop 3 = \"a\"\n") == ErrorCode::syntax_error);
  }

  TEST_CASE("collect merges equal elements across drawings") {
    auto entries = fixture_entries();
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].properties.at(3).text == "Труба 57×3.5");
    CHECK(entries[0].quantity == 10);  // 4 + 6, 4.62 кг == 4620 г
    CHECK(entries[1].properties.at(3).text == "Фланец 50-16");
    CHECK(entries[2].quantity == 3);

    auto all = fixture_entries({});
    CHECK(all.size() == 6);
    CHECK(code_of([&] { fixture_entries({"elevation"}); }) == ErrorCode::unknown_element_type);
    CollectionScope missing{{"axon_k9"}, {}};
    CHECK(code_of([&] { collect(missing, directory_loader(fixture_path("drawings"))); }) == ErrorCode::file_not_found);
  }

  TEST_CASE("numbers meet after unit normalization") {
    DrawingFile f;
    DrawingElement a;
    a.element_type = "axonometric";
    a.quantity = 1;
    a.properties[3] = CellValue::from_text("x");
    a.properties[5] = CellValue::from_number(1.1, "кг");
    DrawingElement b = a;
    b.properties[5] = CellValue::from_number(1100, "г");
    DrawingElement c = a;
    c.properties[5] = CellValue::from_number(1.1);
    f.elements = {a, b, c};
    auto entries = collect({f});
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].quantity == 2);
  }

  TEST_CASE("collect conserves quantity and grows with its scope") {
    Rng rng(81);
    for (int i = 0; i < 300; ++i) {
      std::vector<DrawingFile> files;
      const int n = 1 + static_cast<int>(rng() % 4);
      for (int k = 0; k < n; ++k) files.push_back(random_drawing(rng, static_cast<int>(rng() % 12), "d" + std::to_string(k)));
      std::set<std::string> types;
      if (rng() % 2) types = {"axonometric", "position_label"};

      auto full = collect(files, types);
      double expect = 0;
      for (const auto& f : files) {
        for (const auto& e : f.elements) {
          if (types.empty() || types.count(e.element_type)) expect += e.quantity;
        }
      }
      double got = 0;
      for (const auto& e : full) got += e.quantity;
      CHECK(got == doctest::Approx(expect));

      auto sub = std::vector<DrawingFile>(files.begin(), files.begin() + 1 + static_cast<long>(rng() % files.size()));
      auto part = totals(collect(sub, types));
      auto whole = totals(full);
      for (const auto& [name, q] : part) CHECK(q <= whole[name] + 1e-9);

      // narrowing the types never adds entries
      CHECK(collect(files, {"axonometric"}).size() <= collect(files, {}).size());
    }
  }

  TEST_CASE("autofill a flat specification") {
    TableModule t = fixture_table("spec.tks");
    auto entries = fixture_entries({"axonometric", "position_label"});
    auto report = autofill(t, entries);
    CHECK(report.dropped == std::vector<int>{7});
    REQUIRE(t.data_record_count() == 5);
    CHECK(cell(t, 1, 2) == "Труба 57×3.5");
    CHECK(*resolve_cell(t, CellPath{1, {3}}).numeric == 10);
    CHECK(*resolve_cell(t, CellPath{1, {4}}).numeric == doctest::Approx(4.62));
    CHECK(cell(t, 3, 0) == "1");
    CHECK(cell(t, 3, 2) == "Насос консольный");
    CHECK(report.rows.back() == CellPath{5, {}});
  }

  TEST_CASE("autofill opens the item split of a new record") {
    TableModule t = fixture_table("pipeline.tks");
    insert_record(t, 1);
    auto report = autofill(t, fixture_entries());
    CHECK(t.data_record_count() == 2);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0] == parse_cell_path("2:1.0"));
    CHECK(resolve_cell(t, parse_cell_path("2:1.2.1")).text == "Труба 108×4");
    CHECK(*resolve_cell(t, parse_cell_path("2:1.0.2")).numeric == 10);
    CHECK(report.dropped == std::vector<int>{2});
    CHECK(conforms(t));

    TableModule flange = flange_table();
    CHECK(code_of([&] { autofill(flange, fixture_entries()); }) == ErrorCode::no_data_split);
  }

  TEST_CASE("merge sums quantities and is idempotent") {
    TableModule t = spec_rows({{"", "", "Труба 57×3.5", "4", "4.62", ""},
                               {"", "", "Фланец", "2", "", ""},
                               {"", "", "Труба 57×3.5", "6", "4.62", ""},
                               {"", "", "Труба 57×3.5", "", "4.62", ""},
                               {"", "", "Труба 57×3.5", "много", "4.62", ""}});
    CHECK(merge_identical(t, all_data_rows(t)) == 2);
    REQUIRE(t.data_record_count() == 3);
    CHECK(*resolve_cell(t, CellPath{1, {3}}).numeric == 10);
    CHECK(cell(t, 3, 3) == "много");
    const auto after = t;
    CHECK(merge_identical(t, all_data_rows(t)) == 0);
    CHECK(t == after);
    CHECK(code_of([&] { merge_identical(t, RowRange{RowListRef{}, 0, 2}); }) == ErrorCode::range_out_of_bounds);
  }

  TEST_CASE("merge conserves the quantity total on random rows") {
    Rng rng(83);
    const std::vector<std::string> names = {"a", "b", "c"};
    for (int i = 0; i < 200; ++i) {
      std::vector<std::vector<std::string>> rows;
      double total = 0;
      const int n = 1 + static_cast<int>(rng() % 10);
      for (int k = 0; k < n; ++k) {
        const int q = static_cast<int>(rng() % 5);
        total += q;
        rows.push_back({"", "", names[rng() % names.size()], q ? std::to_string(q) : "", "", ""});
      }
      TableModule t = spec_rows(rows);
      merge_identical(t, all_data_rows(t));
      double got = 0;
      std::set<std::string> seen;
      for (std::size_t r = 1; r < t.records.size(); ++r) {
        auto v = resolve_cell(t, CellPath{r, {3}});
        if (v.numeric) {
          got += *v.numeric;
        } else if (auto n = text::parse_number(v.text)) {
          got += *n;
        }
        CHECK(seen.insert(cell(t, r, 2)).second);
      }
      CHECK(got == total);
    }
  }

  TEST_CASE("sort orders blanks, numbers, then text") {
    TableModule t = spec_rows({{"", "", "Труба 108×4", "", "", ""},
                               {"", "", "", "", "", "x"},
                               {"", "", "108", "", "", ""},
                               {"", "", "57", "", "", ""},
                               {"", "", "Арматура", "", "", ""}});
    sort_rows(t, all_data_rows(t), {"Наименование"});
    CHECK(cell(t, 1, 5) == "x");
    CHECK(cell(t, 2, 2) == "57");
    CHECK(cell(t, 3, 2) == "108");
    CHECK(cell(t, 4, 2) == "Арматура");
    CHECK(cell(t, 5, 2) == "Труба 108×4");
    CHECK(code_of([&] { sort_rows(t, all_data_rows(t), {"Вес"}); }) == ErrorCode::unknown_graph);
  }

  TEST_CASE("sort is a stable permutation") {
    Rng rng(85);
    for (int i = 0; i < 200; ++i) {
      std::vector<std::vector<std::string>> rows;
      const int n = 1 + static_cast<int>(rng() % 12);
      for (int k = 0; k < n; ++k) {
        const std::string keys[] = {"", "3", "10", "б", "а", "2.5"};
        rows.push_back({std::to_string(k), "", keys[rng() % 6], keys[rng() % 3], "", ""});
      }
      TableModule t = spec_rows(rows);
      sort_rows(t, all_data_rows(t), {"Наименование", "Кол"});
      std::multiset<std::string> before, after;
      for (const auto& r : rows) before.insert(r[0]);
      for (std::size_t r = 1; r < t.records.size(); ++r) after.insert(cell(t, r, 0));
      CHECK(before == after);
      auto rank = [](const std::string& s) {
        if (s.empty()) return std::make_tuple(0, 0.0, s);
        if (auto n = text::parse_number(s)) return std::make_tuple(1, *n, std::string());
        return std::make_tuple(2, 0.0, s);
      };
      for (std::size_t r = 2; r < t.records.size(); ++r) {
        auto a = std::make_pair(rank(cell(t, r - 1, 2)), rank(cell(t, r - 1, 3)));
        auto b = std::make_pair(rank(cell(t, r, 2)), rank(cell(t, r, 3)));
        CHECK_FALSE(b < a);
        if (a == b) CHECK(std::stoi(cell(t, r - 1, 0)) < std::stoi(cell(t, r, 0)));
      }
    }
  }

  TEST_CASE("sort_records sorts each section") {
    TableModule t = fixture_table("pipeline.tks");
    insert_record(t, 1);
    insert_record(t, 2);
    for (std::size_t r : {1u, 2u}) {
      for (const char* dn : {"100", "50", "80"}) {
        auto p = insert_part(t, CellPath{r, {1}}, instance_at(t, CellPath{r, {1}}).children.size());
        auto leaf = p[0];
        leaf.steps.push_back(0);
        set_cell(t, leaf, CellValue::from_text(dn));
      }
    }
    sort_records(t, {"DN"});
    for (std::size_t r : {1u, 2u}) {
      CHECK(resolve_cell(t, CellPath{r, {1, 0, 0}}).text == "50");
      CHECK(resolve_cell(t, CellPath{r, {1, 2, 0}}).text == "100");
    }
  }

  TEST_CASE("extract common names") {
    TableModule t = spec_rows({{"", "", "Труба 57×3.5", "", "", ""},
                               {"", "", "Труба 108×4", "", "", ""},
                               {"", "", "Труба", "", "", ""}});
    auto r = extract_common_names(t, all_data_rows(t), "Наименование");
    CHECK(r.applied);
    CHECK(r.header == "Труба");
    REQUIRE(t.data_record_count() == 4);
    CHECK(cell(t, 1, 2) == "Труба");
    CHECK(cell(t, 2, 2) == "57×3.5");
    CHECK(cell(t, 4, 2) == "");

    TableModule cross = spec_rows({{"", "", "Труба 57×3.5", "", "", ""}, {"", "", "Труба 57×4", "", "", ""}});
    r = extract_common_names(cross, all_data_rows(cross), "Наименование");
    CHECK(r.header == "Труба 57×");
    CHECK(cell(cross, 2, 2) == "3.5");
    CHECK(join_common_name(r.header, "3.5") == "Труба 57×3.5");

    // no word boundary: nothing moves
    TableModule none = spec_rows({{"", "", "Отвод", "", "", ""}, {"", "", "Отводы", "", "", ""}});
    const auto before = none;
    CHECK_FALSE(extract_common_names(none, all_data_rows(none), "Наименование").applied);
    CHECK(none == before);
    CHECK(code_of([&] { extract_common_names(none, all_data_rows(none), "Вес"); }) == ErrorCode::unknown_graph);
  }

  TEST_CASE("extracted names rebuild the originals") {
    Rng rng(87);
    const std::vector<std::string> words = {"Труба", "57×", "3.5", "ГОСТ", "10704", "Фланец", "a", "×"};
    int applied = 0;
    for (int i = 0; i < 500; ++i) {
      std::vector<std::vector<std::string>> rows;
      std::vector<std::string> originals;
      const int n = 2 + static_cast<int>(rng() % 4);
      const std::string stem = rng() % 2 ? "Труба " : "Тр";
      for (int k = 0; k < n; ++k) {
        std::string s = stem;
        const int w = static_cast<int>(rng() % 3);
        for (int j = 0; j < w; ++j) s += (j ? " " : "") + words[rng() % words.size()];
        s = text::trim(s);
        originals.push_back(s);
        rows.push_back({"", "", s, "", "", ""});
      }
      TableModule t = spec_rows(rows);
      auto r = extract_common_names(t, all_data_rows(t), "Наименование");
      if (!r.applied) continue;
      ++applied;
      REQUIRE(t.data_record_count() == originals.size() + 1);
      CHECK(cell(t, 1, 2) == r.header);
      for (std::size_t k = 0; k < originals.size(); ++k) {
        CHECK(join_common_name(r.header, cell(t, k + 2, 2)) == originals[k]);
      }
    }
    CHECK(applied > 50);
  }

  TEST_CASE("pack wraps to the column width") {
    TableModule t = spec_rows({{"", "", "Участок по окончательной обработке фитингов", "", "", ""}});
    pack_rows(t, all_data_rows(t));
    const auto v = resolve_cell(t, CellPath{1, {2}});
    // 70 mm at 2 mm per character
    REQUIRE(v.wrapped_lines.size() == 2);
    CHECK(v.wrapped_lines[0] == "Участок по окончательной обработке");
    CHECK(v.wrapped_lines[1] == "фитингов");
    CHECK(record_height(t, 1) == 16);
    CHECK(resolve_cell(t, CellPath{1, {0}}).wrapped_lines.empty());
    const auto once = t;
    pack_rows(t, all_data_rows(t));
    CHECK(t == once);
  }
}
