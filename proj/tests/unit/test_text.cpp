#include <doctest.h>

#include "tkd/text_util.hpp"

using namespace tkd;

TEST_SUITE("text") {
  TEST_CASE("codepoints split multibyte text") {
    auto cps = text::codepoints("Ду×5");
    REQUIRE(cps.size() == 4);
    CHECK(cps[2] == "×");
    CHECK(text::codepoint_count("кгс/см²") == 7);
  }

  TEST_CASE("exact number formatting round-trips") {
    CHECK(text::format_exact(57) == "57");
    CHECK(text::format_exact(3.5) == "3.5");
    CHECK(text::format_exact(0.0980665) == "0.0980665");
    for (double v : {0.1, 1.0 / 3.0, -2.5e-7, 1e21, 123456.789}) {
      CHECK(*text::parse_number(text::format_exact(v)) == v);
    }
  }

  TEST_CASE("display format trims zeros") {
    CHECK(text::format_display(10.0) == "10");
    CHECK(text::format_display(4.62) == "4.62");
    CHECK(text::format_fixed(0.30000, 3) == "0.3");
    CHECK(text::format_fixed(-0.0, 3) == "0");
  }

  TEST_CASE("parse_number accepts a decimal comma and rejects garbage") {
    CHECK(*text::parse_number("1,6") == doctest::Approx(1.6));
    CHECK(*text::parse_number("-30") == -30);
    CHECK_FALSE(text::parse_number("1.6МПа"));
    CHECK_FALSE(text::parse_number(""));
  }

  TEST_CASE("quote escapes") {
    CHECK(text::quote("a\"b\\c\nd") == "\"a\\\"b\\\\c\\nd\"");
  }

  TEST_CASE("wrap respects the budget") {
    auto lines = text::wrap("Участок по первичной обработке фитингов", 20);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "Участок по первичной");
    CHECK(lines[1] == "обработке фитингов");
    CHECK(text::wrap("abcdefgh", 3) == std::vector<std::string>{"abc", "def", "gh"});
    CHECK(text::wrap("a\nb", 10) == std::vector<std::string>{"a", "b"});
  }
}
