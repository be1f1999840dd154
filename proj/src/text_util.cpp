#include "tkd/text_util.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <system_error>

namespace tkd::text {

std::vector<std::string> codepoints(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    if (c >= 0xF0 && c < 0xF8) {
      len = 4;
    } else if (c >= 0xE0) {
      len = (c < 0xF0) ? 3 : 1;
    } else if (c >= 0xC0) {
      len = 2;
    }
    if (i + len > s.size()) len = 1;
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) {
        len = 1;
        break;
      }
    }
    out.emplace_back(s.substr(i, len));
    i += len;
  }
  return out;
}

std::size_t codepoint_count(std::string_view s) {
  std::size_t n = 0;
  for (char ch : s) {
    if ((static_cast<unsigned char>(ch) & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string format_exact(double v) {
  if (v == 0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_display(double v) {
  if (v == 0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  std::string s(buf);
  // %g may still produce "1e+06"-style forms for large magnitudes; keep them.
  return s;
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  std::string buf(trim(s));
  if (buf.empty()) return std::nullopt;
  for (auto& ch : buf) {
    if (ch == ',') ch = '.';
  }
  std::size_t start = (buf[0] == '+') ? 1 : 0;
  double v = 0;
  auto res = std::from_chars(buf.data() + start, buf.data() + buf.size(), v);
  if (res.ec != std::errc() || res.ptr != buf.data() + buf.size()) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += ch;
    }
  }
  out += '"';
  return out;
}

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto nl = s.find('\n', start);
    if (nl == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> wrap(std::string_view s, std::size_t budget) {
  if (budget == 0) budget = 1;
  std::vector<std::string> out;
  for (const auto& paragraph : split_lines(s)) {
    auto cps = codepoints(paragraph);
    std::string line;
    std::size_t line_len = 0;
    std::size_t i = 0;
    bool emitted = false;
    while (i < cps.size()) {
      if (cps[i] == " ") {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < cps.size() && cps[j] != " ") ++j;
      std::size_t word_len = j - i;
      if (line_len > 0 && line_len + 1 + word_len <= budget) {
        line += ' ';
        ++line_len;
      } else if (line_len > 0) {
        out.push_back(line);
        emitted = true;
        line.clear();
        line_len = 0;
      }
      while (word_len > budget - line_len) {
        // hard break inside an overlong word
        std::size_t take = budget - line_len;
        for (std::size_t k = 0; k < take; ++k) line += cps[i + k];
        out.push_back(line);
        emitted = true;
        line.clear();
        line_len = 0;
        i += take;
        word_len -= take;
      }
      for (std::size_t k = i; k < j; ++k) line += cps[k];
      line_len += word_len;
      i = j;
    }
    if (line_len > 0 || !emitted) out.push_back(line);
  }
  return out;
}

}  // namespace tkd::text
