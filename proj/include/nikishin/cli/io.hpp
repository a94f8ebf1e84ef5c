#pragma once

#include "nikishin/cli/config.hpp"
#include "nikishin/polynomial.hpp"

#include <string>
#include <vector>

namespace nikishin::cli {

/// Scientific notation with 17 significant digits.
std::string fmt(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws ConfigError naming the file when absent.
  int column(const std::string& name) const;
  double number(std::size_t row, int col) const;
  std::string source;
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

json read_json(const std::string& path);
void write_json(const std::string& path, const json& j);

/// Shared curve schema: x, side, C<k>_re, C<k>_im (k = 1..n), root<j>_re,
/// root<j>_im (j = 0..n-1).
struct CurveRow {
  double x = 0.0;
  std::string side = "+";
  std::vector<cplx> coefficients;
  std::vector<cplx> roots;
};
std::vector<std::string> curve_header(int degree);
std::vector<std::string> curve_fields(const CurveRow& row);

/// Shared density schema: x, component, density, weight.
struct DensityRow {
  double x = 0.0;
  int component = 1;
  double density = 0.0;
  double weight = 0.0;
};
std::vector<std::string> density_header();
std::vector<std::string> density_fields(const DensityRow& row);

json complex_json(cplx z);
json complex_json(const std::vector<cplx>& zs);

/// Joins the directory and file name.
std::string path_in(const std::string& dir, const std::string& name);
void ensure_directory(const std::string& dir);

}  // namespace nikishin::cli
