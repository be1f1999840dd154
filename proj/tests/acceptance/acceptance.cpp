// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>

#include "fixtures.hpp"
#include "generators.hpp"
#include "tkd/catalog.hpp"
#include "tkd/item_buffer.hpp"
#include "tkd/layout.hpp"
#include "tkd/spec_pipeline.hpp"
#include "tkd/structure.hpp"
#include "tkd/text_util.hpp"
#include "tkd/units.hpp"

using namespace tkd;
using namespace tkd::testing;

namespace {

// Pinned limits.
constexpr double kInsertSeconds = 1.0;
constexpr double kHitSeconds = 30.0;
constexpr double kRoundTripSeconds = 30.0;
constexpr int kHitModules = 1000;
constexpr int kRoundTrips = 500;
constexpr int kQuerySets = 5000;
constexpr int kDrawings = 200;
constexpr double kConversionTolerance = 1e-12;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// 1 ------------------------------------------------------------------------

Outcome flange_insertion() {
  Outcome o;
  const auto t0 = Clock::now();
  TableModule t = flange_table();
  const double row = LayoutOptions{}.row_height_mm;
  // the blank record's flange area: below the two header rows
  auto result = insert_at_point(t, {5, record_height(t, 0) + row / 2});
  const double elapsed = seconds_since(t0);

  std::map<std::size_t, std::size_t> per_column;  // top-level column -> parts created
  for (const auto& p : result.created) ++per_column[p.steps.at(0)];
  const std::map<std::size_t, std::size_t> expect = {{0, 1}, {1, 3}, {2, 1}};
  if (result.created.size() != 5) o.fail("created " + std::to_string(result.created.size()) + " parts");
  if (per_column != expect) o.fail("parts not distributed flange 1 / fasteners 3 / gasket 1");
  if (record_height(t, 1) != 3 * row) o.fail("record height " + text::format_exact(record_height(t, 1)) + " mm");
  if (elapsed >= kInsertSeconds) o.fail("took " + text::format_exact(elapsed) + " s");
  if (o.pass) o.detail = "5 parts (1/3/1), record height 3 rows";
  return o;
}

// 2 ------------------------------------------------------------------------

Outcome hit_test_inverse() {
  Outcome o;
  const auto t0 = Clock::now();
  Rng rng(2024);
  std::size_t probes = 0;
  for (int i = 0; i < kHitModules; ++i) {
    TableModule t = random_module(rng);
    for (const auto& leaf : layout(t).leaves) {
      if (!leaf.visible || leaf.rect.area() <= 0) continue;  // nothing to click
      ++probes;
      CellPath got;
      try {
        got = hit_test(t, leaf.rect.center());
      } catch (const Error& e) {
        o.fail(format_cell_path(leaf.path) + ": " + e.what());
        continue;
      }
      if (got != leaf.path) o.fail(format_cell_path(leaf.path) + " hit as " + format_cell_path(got));
    }
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= kHitSeconds) o.fail("took " + text::format_exact(elapsed) + " s");
  if (o.pass) o.detail = std::to_string(kHitModules) + " modules, " + std::to_string(probes) + " leaves";
  return o;
}

// 3 ------------------------------------------------------------------------

Outcome round_trips() {
  Outcome o;
  const auto t0 = Clock::now();
  Rng rng(3);
  for (int i = 0; i < kRoundTrips; ++i) {
    auto tmpl = random_template(rng);
    const std::string s = serialize_structure(tmpl);
    auto back = parse_structure(s).tmpl;
    if (!(back == tmpl) || serialize_structure(back) != s) o.fail(".tks instance " + std::to_string(i));
  }
  for (int i = 0; i < kRoundTrips; ++i) {
    auto m = random_module(rng);
    const std::string s = save_module(m);
    auto back = load_module(s);
    if (!(back == m) || save_module(back) != s) o.fail(".tkm instance " + std::to_string(i));
  }
  for (int i = 0; i < kRoundTrips; ++i) {
    auto b = random_buffer(rng);
    const std::string s = save_buffer(b);
    auto back = load_buffer(s);
    if (!(back == b) || save_buffer(back) != s) o.fail(".tkb instance " + std::to_string(i));
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= kRoundTripSeconds) o.fail("took " + text::format_exact(elapsed) + " s");
  if (o.pass) o.detail = "3 x " + std::to_string(kRoundTrips) + " byte-identical";
  return o;
}

// 4 ------------------------------------------------------------------------

Outcome buffer_transfer() {
  Outcome o;
  TableModule src = load_module(read_fixture("explication_sample.tkm"));
  TableModule spec = fixture_table("spec.tks");
  auto buffer = copy_to_buffer(src, all_data_rows(src));
  auto report = paste_from_buffer(buffer, spec, RowListRef{}, std::nullopt);

  auto text_at = [](const TableModule& t, std::size_t r, std::size_t c) { return resolve_cell(t, CellPath{r, {c}}).text; };
  if (report.dropped != std::vector<int>{7}) o.fail("dropped ids differ from {7}");
  if (spec.data_record_count() != src.data_record_count()) o.fail("row count differs");
  std::size_t nines = 0;
  for (std::size_t r = 1; r < spec.records.size() && r < src.records.size(); ++r) {
    if (text_at(spec, r, 0) != text_at(src, r, 1)) o.fail("row " + std::to_string(r) + ": position");
    if (text_at(spec, r, 2) != text_at(src, r, 2)) o.fail("row " + std::to_string(r) + ": name");
    if (text_at(spec, r, 3) != text_at(src, r, 4)) o.fail("row " + std::to_string(r) + ": quantity");
    if (text_at(spec, r, 5) != text_at(src, r, 5)) o.fail("row " + std::to_string(r) + ": note");
    if (!resolve_cell(spec, CellPath{r, {4}}).blank()) o.fail("row " + std::to_string(r) + ": mass not blank");
    if (!resolve_cell(spec, CellPath{r, {1}}).blank()) o.fail("row " + std::to_string(r) + ": designation not blank");
    nines += text_at(spec, r, 3) == "9";
  }
  if (nines == 0) o.fail("no quantity 9 carried");
  if (text_at(spec, 1, 5) != "Централизованно") o.fail("note 'Централизованно' missing");
  if (render_text(spec) != read_fixture("golden/spec_from_explication.txt")) o.fail("render differs from the golden table");
  if (o.pass) o.detail = std::to_string(spec.data_record_count()) + " rows, property 7 dropped";
  return o;
}

// 5 ------------------------------------------------------------------------

// Exhaustive scan with its own conversion factors (Pa, kelvin).
double oracle_pa(double v, const std::string& u) {
  static const std::map<std::string, double> f = {
      {"МПа", 1e6}, {"кПа", 1e3}, {"бар", 1e5}, {"кгс/см²", 98066.5}, {"м вод.ст.", 9806.65}};
  return v * f.at(u);
}

double oracle_k(double v, const std::string& u) { return u == "K" ? v : v + 273.15; }

bool oracle_in(const std::optional<Range>& r, double v, double lo_conv, double hi_conv) {
  if (!r) return true;
  const double eps = 1e-6 * std::max(1.0, std::fabs(v));
  return (!r->lo || lo_conv <= v + eps) && (!r->hi || v - eps <= hi_conv);
}

Outcome catalog_brute_force() {
  Outcome o;
  CatalogStore store;
  store.catalogs.push_back(load_catalog(read_fixture("pipes.cat")));
  store.catalogs.push_back(load_catalog(read_fixture("pipes_kgf.cat")));

  const std::vector<std::string> p_units = {"МПа", "кгс/см²", "бар", "кПа", "м вод.ст."};
  const std::vector<double> p_mpa = {0.05, 0.1, 0.6, 1.0, 1.569064, 1.6, 2.0, 2.5, 4.0, 6.2, 6.3, 7.0};
  const std::vector<double> t_c = {-60, -40, -30, 0, 20, 80, 115, 116, 300, 400, 425, 430};
  const std::vector<int> dns = {25, 32, 40, 50, 65, 80, 100, 125, 150, 200, 250, 300};
  Rng rng(5);
  std::size_t hits = 0;
  for (int i = 0; i < kQuerySets; ++i) {
    ConstraintSet c;
    if (rng() % 4) {
      const std::string u = p_units[rng() % p_units.size()];
      c.pressure = Quantity{convert(p_mpa[rng() % p_mpa.size()], "МПа", u), u};
    }
    if (rng() % 4) {
      const double t = t_c[rng() % t_c.size()];
      c.temperature = rng() % 2 ? Quantity{t, "°C"} : Quantity{t + 273.15, "K"};
    }
    if (rng() % 3) c.dn = dns[rng() % dns.size()];

    std::vector<CatalogMatch> expect;
    for (std::size_t s = 0; s < store.catalogs.size(); ++s) {
      const auto& cat = store.catalogs[s];
      for (std::size_t k = 0; k < cat.items.size(); ++k) {
        const auto& a = cat.items[k].applicability;
        bool ok = true;
        if (c.pressure && a.pressure) {
          ok = ok && oracle_in(a.pressure, oracle_pa(c.pressure->value, c.pressure->unit),
                               a.pressure->lo ? oracle_pa(*a.pressure->lo, cat.pressure_unit) : 0,
                               a.pressure->hi ? oracle_pa(*a.pressure->hi, cat.pressure_unit) : 0);
        }
        if (c.temperature && a.temperature) {
          ok = ok && oracle_in(a.temperature, oracle_k(c.temperature->value, c.temperature->unit),
                               a.temperature->lo ? oracle_k(*a.temperature->lo, cat.temperature_unit) : 0,
                               a.temperature->hi ? oracle_k(*a.temperature->hi, cat.temperature_unit) : 0);
        }
        if (c.dn && a.dn) ok = ok && std::count(a.dn->begin(), a.dn->end(), *c.dn) > 0;
        if (ok) expect.push_back({s, k});
      }
    }
    auto got = query(store, "Трубы", c);
    hits += got.size();
    if (got != expect) o.fail("constraint set " + std::to_string(i) + " differs");
  }
  if (o.pass) o.detail = std::to_string(kQuerySets) + " constraint sets, " + std::to_string(hits) + " matches";
  return o;
}

// 6 ------------------------------------------------------------------------

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

Outcome unit_conversions() {
  Outcome o;
  const double a = convert(1, "кгс/см²", "МПа");
  const double b = convert(10, "м вод.ст.", "МПа");
  if (rel(a, 0.0980665) > kConversionTolerance) o.fail("1 кгс/см² = " + text::format_exact(a) + " МПа");
  if (rel(b, 0.0980665) > kConversionTolerance) o.fail("10 м вод.ст. = " + text::format_exact(b) + " МПа");

  const std::vector<std::vector<std::string>> families = {
      {"Па", "кПа", "МПа", "бар", "кгс/см²", "м вод.ст."}, {"°C", "K"}, {"мм", "м"}, {"г", "кг"}};
  Rng rng(6);
  std::uniform_real_distribution<double> mag(0.0, 6.0);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto& f = families[rng() % families.size()];
    const auto& from = f[rng() % f.size()];
    const auto& to = f[rng() % f.size()];
    const double x = (rng() % 2 ? 1 : -1) * std::pow(10.0, mag(rng));
    const double back = convert(convert(x, from, to), to, from);
    worst = std::max(worst, rel(back, x));
  }
  if (worst > kConversionTolerance) o.fail("round-trip error " + text::format_exact(worst));
  if (o.pass) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst round-trip %.2e", worst);
    o.detail = buf;
  }
  return o;
}

// 7 ------------------------------------------------------------------------

double quantity_sum(const TableModule& t) {
  double s = 0;
  for (std::size_t r = 1; r < t.records.size(); ++r) {
    auto v = resolve_cell(t, CellPath{r, {3}});
    if (v.numeric) s += *v.numeric;
  }
  return s;
}

std::multiset<std::string> row_multiset(const TableModule& t) {
  std::multiset<std::string> out;
  for (std::size_t r = 1; r < t.records.size(); ++r) {
    std::string key;
    for (std::size_t c = 0; c < 6; ++c) key += resolve_cell(t, CellPath{r, {c}}).text + '\x1f';
    out.insert(key);
  }
  return out;
}

Outcome spec_conservation() {
  Outcome o;
  Rng rng(7);
  for (int i = 0; i < kDrawings; ++i) {
    const std::string tag = "drawing set " + std::to_string(i);
    std::vector<DrawingFile> files;
    const int n = 1 + static_cast<int>(rng() % 3);
    double expect = 0;
    for (int k = 0; k < n; ++k) {
      files.push_back(random_drawing(rng, 1 + static_cast<int>(rng() % 10), "d" + std::to_string(k)));
      for (const auto& e : files.back().elements) expect += e.quantity;
    }
    // one autofill per drawing so that equal rows meet in the table
    TableModule t = fixture_table("spec.tks");
    for (const auto& f : files) autofill(t, collect({f}));
    if (quantity_sum(t) != expect) o.fail(tag + ": autofill changed the total");

    merge_identical(t, all_data_rows(t));
    if (quantity_sum(t) != expect) o.fail(tag + ": merge changed the total");
    const TableModule merged = t;
    if (merge_identical(t, all_data_rows(t)) != 0 || !(t == merged)) o.fail(tag + ": merge not idempotent");

    const auto before = row_multiset(t);
    sort_rows(t, all_data_rows(t), {"Наименование", "Масса"});
    if (row_multiset(t) != before) o.fail(tag + ": sort is not a permutation");
    if (quantity_sum(t) != expect) o.fail(tag + ": sort changed the total");
  }
  if (o.pass) o.detail = std::to_string(kDrawings) + " drawing sets";
  return o;
}

// 8 ------------------------------------------------------------------------

Outcome pagination() {
  Outcome o;
  TableModule t = flange_table();
  insert_at_point(t, {5, 20});
  for (int k = 0; k < 6; ++k) {
    insert_record(t, t.records.size());
    if (k % 2 == 0) insert_part(t, CellPath{t.records.size() - 1, {0, 1}}, 0);
  }
  PaginateOptions opts;
  opts.number_row = true;
  opts.first_number = 25;
  auto segs = paginate(t, 72, opts);

  std::vector<int> expect;
  for (int n = 25; n <= 40; ++n) expect.push_back(n);
  std::size_t next = 0;
  for (const auto& s : segs) {
    if (s.graph_numbers != expect) o.fail("graph numbers are not 25..40");
    if (s.record_begin != next || s.record_end <= s.record_begin) o.fail("segments do not partition the records");
    next = s.record_end;
    if (s.rect.height > 72 + 1e-9) o.fail("segment taller than the chunk");
    auto tree = layout_segment(t, s);
    std::set<std::string> drawn;
    for (const auto& text : tree.texts) drawn.insert(text.text);
    for (int n : expect) {
      if (!drawn.count(std::to_string(n))) o.fail("number " + std::to_string(n) + " not drawn");
    }
  }
  if (next != t.records.size()) o.fail("records left over");
  if (segs.size() < 2) o.fail("expected a continuation");
  if (o.pass) o.detail = std::to_string(segs.size()) + " segments, graphs 25..40";
  return o;
}

// 9 ------------------------------------------------------------------------

bool flat(const TableModule& t, std::size_t record, const TemplatePath& tpath) {
  const BlockNode* node = &t.tmpl.root;
  const InstanceNode* inst = &t.records[record];
  for (auto step : tpath) {
    if (node->arbitrary) {
      if (inst->children.size() != 1) return false;
      step = 0;
    }
    node = &node->children[node->arbitrary ? 0 : step];
    inst = &inst->children[step];
  }
  return true;
}

Outcome flat_region_maximality() {
  Outcome o;
  TableModule t = flange_table();
  // records with a mix of part counts
  insert_part(t, CellPath{1, {0, 1}}, 0);
  for (int k = 0; k < 4; ++k) insert_record(t, t.records.size());
  for (std::size_t r : {2u, 3u, 4u}) {
    insert_part(t, CellPath{r, {0, 1}}, 0);
  }
  insert_part(t, CellPath{4, {2, 1}}, 1);

  const auto graphs = enumerate_graphs(t.tmpl);
  const std::size_t G = graphs.size(), R = t.records.size();
  std::size_t seeds = 0;
  for (std::size_t r = 1; r < R; ++r) {
    for (std::size_t g = 0; g < G; ++g) {
      if (!flat(t, r, graphs[g].template_path)) continue;
      ++seeds;
      // every rectangle holding the seed
      std::tuple<std::size_t, std::size_t, std::size_t, std::size_t> best{0, 0, 0, 0};  // w, h, -a, -lo
      std::size_t ba = 0, bl = 0;
      for (std::size_t a = 0; a <= g; ++a) {
        for (std::size_t b = g + 1; b <= G; ++b) {
          for (std::size_t lo = 1; lo <= r; ++lo) {
            for (std::size_t hi = r + 1; hi <= R; ++hi) {
              bool all = true;
              for (std::size_t rr = lo; rr < hi && all; ++rr) {
                for (std::size_t gg = a; gg < b && all; ++gg) all = flat(t, rr, graphs[gg].template_path);
              }
              if (!all) continue;
              std::tuple<std::size_t, std::size_t, std::size_t, std::size_t> key{b - a, hi - lo, G - a, R - lo};
              if (key > best) {
                best = key;
                ba = a;
                bl = lo;
              }
            }
          }
        }
      }
      auto region = flat_region(t, *flat_cell(t, r, graphs[g]));
      if (region.graph_begin != ba || region.graph_end - region.graph_begin != std::get<0>(best) ||
          region.record_begin != bl || region.record_end - region.record_begin != std::get<1>(best)) {
        o.fail("seed record " + std::to_string(r) + " graph " + graphs[g].graph_id);
      }
    }
  }
  if (seeds == 0) o.fail("no flat seeds in the fixture");
  if (o.pass) o.detail = std::to_string(seeds) + " seeds";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"flange-joint insertion", flange_insertion},
      {"hit-test inverse", hit_test_inverse},
      {"round-trips", round_trips},
      {"buffer transfer", buffer_transfer},
      {"catalog filtering", catalog_brute_force},
      {"unit conversions", unit_conversions},
      {"spec pipeline conservation", spec_conservation},
      {"pagination", pagination},
      {"flat-region maximality", flat_region_maximality},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double elapsed = seconds_since(t0);
    std::printf("criterion %zu %-28s %s  %.3f s  %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                elapsed, o.detail.c_str());
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
