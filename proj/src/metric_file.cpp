#include "gmap/metric_file.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace gmap {

namespace {

struct Location {
  const std::filesystem::path& path;
  int line;
};

[[noreturn]] void fail(const Location& loc, const std::string& message) {
  throw InputError(loc.path.string() + ":" + std::to_string(loc.line) + ": " + message);
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// strip a trailing comment, respecting double quotes
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  for (char c : value) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item.push_back(c);
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

double parse_double(const std::string& text, const Location& loc) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    fail(loc, "malformed number '" + text + "'");
  return v;
}

} // namespace

MetricSpecFile load_metric_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open metric file '" + path.string() + "'");

  std::string name, expected;
  std::optional<int> dim;
  std::vector<std::string> coords;
  std::map<std::string, Interval> ranges;
  double margin = 0.1;
  struct Component {
    std::string expr;
    int line;
  };
  std::map<std::pair<int, int>, Component> components;

  enum class Section { None, Meta, Chart, Metric };
  Section section = Section::None;

  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    Location loc{path, lineno};
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line == "[meta]") section = Section::Meta;
      else if (line == "[chart]") section = Section::Chart;
      else if (line == "[metric]") section = Section::Metric;
      else fail(loc, "unknown section " + line);
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(loc, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(loc, "empty key");

    switch (section) {
      case Section::None:
        fail(loc, "key outside any section");
      case Section::Meta:
        if (key == "name") name = value;
        else if (key == "expected") expected = value;
        // other metadata is tolerated and ignored
        break;
      case Section::Chart: {
        if (key == "dim") {
          dim = static_cast<int>(parse_double(value, loc));
        } else if (key == "coords") {
          coords = split_list(value);
        } else if (key == "margin") {
          margin = parse_double(value, loc);
        } else if (key.rfind("range", 0) == 0) {
          std::string coord = trim(key.substr(5));
          if (coord.empty()) fail(loc, "range key needs a coordinate name");
          auto parts = split_list(value);
          if (parts.size() != 2) fail(loc, "range needs two numbers");
          ranges[coord] = Interval{parse_double(parts[0], loc), parse_double(parts[1], loc)};
        } else {
          fail(loc, "unknown chart key '" + key + "'");
        }
        break;
      }
      case Section::Metric: {
        if (key.size() != 3 || key[0] != 'g' || !std::isdigit((unsigned char)key[1]) ||
            !std::isdigit((unsigned char)key[2]))
          fail(loc, "metric keys look like g12");
        int i = key[1] - '1';
        int j = key[2] - '1';
        if (i < 0 || j < 0) fail(loc, "component indices start at 1");
        if (i > j) {
          if (components.count({j, i}))
            fail(loc, "duplicate symmetric entry " + key + " (g" +
                          std::to_string(j + 1) + std::to_string(i + 1) +
                          " already given)");
          fail(loc, "only upper-triangle keys are allowed; use g" +
                        std::to_string(j + 1) + std::to_string(i + 1));
        }
        if (components.count({i, j})) fail(loc, "duplicate metric entry " + key);
        if (value.size() < 2 || value.front() != '"' || value.back() != '"')
          fail(loc, "component expressions must be double-quoted");
        components[{i, j}] = Component{value.substr(1, value.size() - 2), lineno};
        break;
      }
    }
  }

  Location eof{path, lineno};
  if (!dim) fail(eof, "missing chart dim");
  if (coords.empty()) fail(eof, "missing chart coords");
  if (static_cast<int>(coords.size()) != *dim)
    fail(eof, "dim does not match the number of coordinates");

  std::vector<Interval> domain;
  for (const std::string& c : coords) {
    auto it = ranges.find(c);
    if (it == ranges.end()) fail(eof, "missing range for coordinate '" + c + "'");
    domain.push_back(it->second);
  }
  Chart chart(coords, domain, margin);

  const int n = *dim;
  if (n > 9) fail(eof, "metric keys support at most 9 coordinates");
  std::vector<std::vector<ExprPtr>> table(static_cast<std::size_t>(n),
                                          std::vector<ExprPtr>(static_cast<std::size_t>(n)));
  ExprPtr zero = Expr::constant(0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      auto it = components.find({i, j});
      ExprPtr e;
      if (it == components.end()) {
        if (i == j)
          fail(eof, "missing diagonal component g" + std::to_string(i + 1) +
                        std::to_string(i + 1));
        e = zero;
      } else {
        try {
          e = parse_expression(it->second.expr, chart.coords());
        } catch (const ParseError& err) {
          fail(Location{path, it->second.line},
               std::string("in expression at offset ") +
                   std::to_string(err.position()) + ": " + err.what());
        }
      }
      table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e;
      table[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = e;
    }

  for (auto& [key, comp] : components) {
    if (key.first >= n || key.second >= n)
      fail(Location{path, comp.line}, "component index exceeds the dimension");
  }

  std::string final_name = name.empty() ? path.stem().string() : name;
  return MetricSpecFile{MetricField(chart, std::move(table), final_name),
                        final_name, expected};
}

} // namespace gmap
