#include <doctest.h>

#include <tuple>

#include "fixtures.hpp"
#include "generators.hpp"
#include "tkd/layout.hpp"

using namespace tkd;
using namespace tkd::testing;

namespace {

// Flat when every arbitrary split above the graph holds exactly one part.
bool is_flat(const TableModule& t, std::size_t record, const TemplatePath& tpath) {
  const BlockNode* node = &t.tmpl.root;
  const InstanceNode* inst = &t.records[record];
  for (auto step : tpath) {
    if (node->arbitrary) {
      if (inst->children.size() != 1) return false;
      node = &node->children[0];
      inst = &inst->children[0];
    } else {
      node = &node->children[step];
      inst = &inst->children[step];
    }
  }
  return true;
}

struct Best {
  std::size_t w = 0, h = 0, a = 0, lo = 0;
};

Best brute_force(const TableModule& t, std::size_t seed_record, std::size_t g0) {
  const auto graphs = enumerate_graphs(t.tmpl);
  Best best;
  for (std::size_t a = 0; a <= g0; ++a) {
    for (std::size_t b = g0 + 1; b <= graphs.size(); ++b) {
      for (std::size_t lo = 1; lo <= seed_record; ++lo) {
        for (std::size_t hi = seed_record + 1; hi <= t.records.size(); ++hi) {
          bool all = true;
          for (std::size_t r = lo; r < hi && all; ++r) {
            for (std::size_t g = a; g < b && all; ++g) all = is_flat(t, r, graphs[g].template_path);
          }
          if (!all) continue;
          const std::size_t w = b - a, h = hi - lo;
          if (std::make_tuple(w, h, graphs.size() - a, t.records.size() - lo) >
              std::make_tuple(best.w, best.h, graphs.size() - best.a, t.records.size() - best.lo)) {
            best = {w, h, a, lo};
          }
        }
      }
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("flat_region") {
  TEST_CASE("flat spec table is one region") {
    TableModule t = fixture_table("spec.tks");
    for (int i = 0; i < 4; ++i) insert_record(t, 1);
    auto region = flat_region(t, parse_cell_path("2:3"));
    CHECK(region.graph_begin == 0);
    CHECK(region.graph_end == 6);
    CHECK(region.record_begin == 1);
    CHECK(region.record_end == 5);
    CHECK(region.grid[1][3] == parse_cell_path("2:3"));
  }

  TEST_CASE("grouped rows break flatness") {
    TableModule t = flange_table();
    insert_part(t, parse_cell_path("1:0.1"), 0);
    // three bolt parts; gaskets (one part) and welds stay flat
    auto region = flat_region(t, parse_cell_path("1:3.1.0"));
    CHECK(region.graph_begin == 10);
    CHECK(region.graph_end == 16);
    auto single = flat_region(t, parse_cell_path("1:1.1.1.0"));
    CHECK(single.grid.size() == 1);
    CHECK(single.grid[0].size() == 1);
  }

  TEST_CASE("matches the brute-force oracle") {
    Rng rng(61);
    int checked = 0;
    for (int i = 0; i < 150; ++i) {
      ModuleShape shape;
      shape.max_inserts = 2;
      TableModule t = random_module(rng, shape);
      const auto graphs = enumerate_graphs(t.tmpl);
      for (std::size_t r = 1; r < t.records.size(); ++r) {
        for (std::size_t g = 0; g < graphs.size(); ++g) {
          if (!is_flat(t, r, graphs[g].template_path)) continue;
          auto seed = flat_cell(t, r, graphs[g]);
          REQUIRE(seed);
          auto region = flat_region(t, *seed);
          Best b = brute_force(t, r, g);
          CHECK(region.graph_end - region.graph_begin == b.w);
          CHECK(region.record_end - region.record_begin == b.h);
          CHECK(region.graph_begin == b.a);
          CHECK(region.record_begin == b.lo);
          ++checked;
        }
      }
    }
    CHECK(checked > 200);
  }
}
