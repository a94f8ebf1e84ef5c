#include "nikishin/cli/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace nikishin::cli {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  throw ConfigError(source, "missing column '" + name + "'");
}

double CsvTable::number(std::size_t row, int col) const {
  const std::string& s = rows.at(row).at(static_cast<std::size_t>(col));
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(source, "row " + std::to_string(row + 1) + ": '" + s + "' is not a number");
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open");
  CsvTable t;
  t.source = path;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path, "empty file");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split(line);
    if (row.size() != t.header.size())
      throw ConfigError(path, "row " + std::to_string(t.rows.size() + 1) + " has " +
                                  std::to_string(row.size()) + " fields, expected " +
                                  std::to_string(t.header.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path, std::string("parse error: ") + e.what());
  }
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

std::vector<std::string> curve_header(int degree) {
  std::vector<std::string> h{"x", "side"};
  for (int k = 1; k <= degree; ++k) {
    h.push_back("C" + std::to_string(k) + "_re");
    h.push_back("C" + std::to_string(k) + "_im");
  }
  for (int j = 0; j < degree; ++j) {
    h.push_back("root" + std::to_string(j) + "_re");
    h.push_back("root" + std::to_string(j) + "_im");
  }
  return h;
}

std::vector<std::string> curve_fields(const CurveRow& row) {
  std::vector<std::string> f{fmt(row.x), row.side};
  for (const cplx& c : row.coefficients) {
    f.push_back(fmt(c.real()));
    f.push_back(fmt(c.imag()));
  }
  for (const cplx& r : row.roots) {
    f.push_back(fmt(r.real()));
    f.push_back(fmt(r.imag()));
  }
  return f;
}

std::vector<std::string> density_header() { return {"x", "component", "density", "weight"}; }

std::vector<std::string> density_fields(const DensityRow& row) {
  return {fmt(row.x), std::to_string(row.component), fmt(row.density), fmt(row.weight)};
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json complex_json(const std::vector<cplx>& zs) {
  json a = json::array();
  for (const cplx& z : zs) a.push_back(complex_json(z));
  return a;
}

std::string path_in(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());
}

}  // namespace nikishin::cli
