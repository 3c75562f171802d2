#include "wavemorph/text.hpp"

#include "wavemorph/errors.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace wavemorph {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  if (s == "inf" || s == "+inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InputError("cannot parse " + std::string(what) + " from '" + s + "'");
  return v;
}

int parse_int(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InputError("cannot parse " + std::string(what) + " from '" + s + "'");
  return v;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trim(std::string_view text) {
  const auto b = text.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(b, e - b + 1));
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                const std::vector<std::string>& columns,
                                                const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputError(source + ": empty CSV");
  auto header = split(trim(line), ',');
  for (auto& h : header) h = trim(h);
  if (header != columns) throw InputError(source + ": unexpected CSV header '" + trim(line) + "'");
  std::vector<std::vector<std::string>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split(trim(line), ',');
    if (fields.size() != columns.size())
      throw InputError(source + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(columns.size()) + " fields");
    for (auto& f : fields) f = trim(f);
    rows.push_back(std::move(fields));
  }
  return rows;
}

} // namespace wavemorph
