#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aptsense/sweep.hpp"

namespace aptsense {

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

double parse_double(const std::string& s, int line) {
  if (s == "nan" || s == "-nan") return std::nan("");
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError(line, "malformed number '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

int SweepResult::column(const std::string& name) const {
  for (size_t k = 0; k < header.size(); ++k)
    if (header[k].name == name) return static_cast<int>(k);
  return -1;
}

void write_csv(const SweepResult& r, std::ostream& os) {
  for (const auto& [k, v] : r.metadata) os << "# " << k << " = " << v << "\n";
  for (size_t c = 0; c < r.header.size(); ++c) {
    if (c) os << ",";
    os << r.header[c].name;
    if (!r.header[c].unit.empty()) os << " (" << r.header[c].unit << ")";
  }
  os << ",tag\n";
  for (const auto& row : r.rows) {
    for (size_t c = 0; c < row.values.size(); ++c) {
      if (c) os << ",";
      os << fmt(row.values[c]);
    }
    os << "," << row.tag << "\n";
  }
}

SweepResult read_csv(std::istream& is) {
  SweepResult r;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.starts_with("#")) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = line.substr(1, eq - 1);
        std::string val = line.substr(eq + 1);
        const auto trim = [](std::string& s) {
          s.erase(0, s.find_first_not_of(" \t"));
          s.erase(s.find_last_not_of(" \t") + 1);
        };
        trim(key);
        trim(val);
        r.metadata[key] = val;
      }
      continue;
    }
    auto cells = split(line, ',');
    if (!have_header) {
      for (size_t c = 0; c + 1 < cells.size(); ++c) {
        Column col;
        const auto paren = cells[c].find(" (");
        if (paren != std::string::npos && cells[c].back() == ')') {
          col.name = cells[c].substr(0, paren);
          col.unit = cells[c].substr(paren + 2, cells[c].size() - paren - 3);
        } else {
          col.name = cells[c];
        }
        r.header.push_back(col);
      }
      have_header = true;
      continue;
    }
    if (cells.size() != r.header.size() + 1)
      throw ConfigError(lineno, "row width does not match header");
    Row row;
    for (size_t c = 0; c < r.header.size(); ++c)
      row.values.push_back(parse_double(cells[c], lineno));
    row.tag = cells.back();
    r.rows.push_back(std::move(row));
  }
  return r;
}

void write_json(const SweepResult& r, std::ostream& os) {
  nlohmann::ordered_json j;
  j["metadata"] = r.metadata;
  auto& cols = j["columns"] = nlohmann::ordered_json::array();
  for (const auto& c : r.header) cols.push_back({{"name", c.name}, {"unit", c.unit}});
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json rec;
    auto& vals = rec["values"] = nlohmann::ordered_json::array();
    for (double v : row.values) {
      if (std::isnan(v)) vals.push_back(nullptr);
      else vals.push_back(v);
    }
    rec["tag"] = row.tag;
    rows.push_back(std::move(rec));
  }
  os << j.dump(1) << "\n";
}

SweepResult read_json(std::istream& is) {
  nlohmann::json j;
  is >> j;
  SweepResult r;
  for (const auto& [k, v] : j.at("metadata").items()) r.metadata[k] = v.get<std::string>();
  for (const auto& c : j.at("columns"))
    r.header.push_back({c.at("name").get<std::string>(), c.at("unit").get<std::string>()});
  for (const auto& rec : j.at("rows")) {
    Row row;
    for (const auto& v : rec.at("values")) {
      if (v.is_null()) row.values.push_back(std::nan(""));
      else row.values.push_back(v.get<double>());
    }
    row.tag = rec.at("tag").get<std::string>();
    r.rows.push_back(std::move(row));
  }
  return r;
}

void write_table(const SweepResult& r, const std::string& path, OutputFormat f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  if (f == OutputFormat::Csv) write_csv(r, os);
  else write_json(r, os);
}

SweepResult read_table(const std::string& path, OutputFormat f) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open input file: " + path);
  return f == OutputFormat::Csv ? read_csv(is) : read_json(is);
}

}  // namespace aptsense
