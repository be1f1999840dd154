#include <doctest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "tkd/structure.hpp"

using namespace tkd;
using namespace tkd::testing;

namespace {

ErrorCode load_code(const std::string& text) {
  try {
    load_module(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("loaded without error");
  return ErrorCode::invalid_value;
}

}  // namespace

TEST_SUITE("module_io") {
  TEST_CASE("random modules survive save and load") {
    Rng rng(21);
    for (int i = 0; i < 400; ++i) {
      TableModule t = random_module(rng);
      t.continuation.chunk_height_mm = static_cast<double>(rng() % 3) * 50;
      t.continuation.direction = rng() % 2 ? Direction::left : Direction::right;
      t.continuation.number_row = rng() % 2;
      t.continuation.first_graph_number = 1 + static_cast<int>(rng() % 30);
      const std::string text = save_module(t);
      TableModule back = load_module(text);
      if (!(back == t)) FAIL(text);
      CHECK(save_module(back) == text);
    }
  }

  TEST_CASE("sample explication module loads") {
    TableModule t = load_module(read_fixture("explication_sample.tkm"));
    CHECK(t.data_record_count() == 12);
    CHECK(conforms(t));
  }

  TEST_CASE("version and syntax errors") {
    TableModule t = flange_table();
    insert_part(t, parse_cell_path("1:0.1"), 0);
    const std::string good = save_module(t);
    CHECK(good.rfind(std::string(kModuleVersion), 0) == 0);

    std::string future = good;
    future.replace(0, kModuleVersion.size(), "tkd/9");
    CHECK(load_code(future) == ErrorCode::version_mismatch);
    CHECK(load_code("") == ErrorCode::syntax_error);
    CHECK(load_code("hello\n") == ErrorCode::syntax_error);

    std::string truncated = good.substr(0, good.find("@end"));
    CHECK(load_code(truncated) == ErrorCode::syntax_error);

    std::string bad_path = good;
    const auto at = bad_path.find("@end");
    bad_path.insert(at, "  cell [9 9] \"x\"\n");
    CHECK(load_code(bad_path) == ErrorCode::syntax_error);
  }
}
