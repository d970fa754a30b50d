#include "mnarcor/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "mnarcor/errors.hpp"

namespace mnarcor {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool is_missing_token(const std::string& t) {
  if (t.empty()) return true;
  std::string lower(t);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return lower == "na" || lower == "nan";
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

int find_column(const CsvTable& table, const std::string& name) {
  const auto it = std::find(table.columns.begin(), table.columns.end(), name);
  if (it == table.columns.end())
    throw design_error("column '" + name + "' not found in CSV header");
  return static_cast<int>(it - table.columns.begin());
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open '" + path + "' for reading");

  std::string line;
  if (!std::getline(in, line)) throw design_error("CSV '" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  CsvTable table;
  table.columns = split_line(line);
  const std::size_t ncol = table.columns.size();
  if (ncol == 0) throw design_error("CSV '" + path + "' has an empty header");

  std::vector<std::vector<double>> rows;
  std::vector<std::vector<bool>> masks;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_line(line);
    if (fields.size() != ncol)
      throw design_error("CSV '" + path + "' line " + std::to_string(lineno) + ": expected " +
                         std::to_string(ncol) + " fields, got " +
                         std::to_string(fields.size()));
    std::vector<double> row(ncol);
    std::vector<bool> mask(ncol);
    for (std::size_t j = 0; j < ncol; ++j) {
      if (is_missing_token(fields[j])) {
        row[j] = std::numeric_limits<double>::quiet_NaN();
        mask[j] = false;
        continue;
      }
      double v = 0.0;
      const char* first = fields[j].data();
      const char* last = first + fields[j].size();
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last)
        throw design_error("CSV '" + path + "' line " + std::to_string(lineno) +
                           ": cannot parse '" + fields[j] + "' as a number");
      row[j] = v;
      mask[j] = true;
    }
    rows.push_back(std::move(row));
    masks.push_back(std::move(mask));
  }

  const int n = static_cast<int>(rows.size());
  table.values.resize(n, static_cast<int>(ncol));
  table.observed.resize(n, static_cast<int>(ncol));
  for (int i = 0; i < n; ++i)
    for (std::size_t j = 0; j < ncol; ++j) {
      table.values(i, static_cast<int>(j)) = rows[i][j];
      table.observed(i, static_cast<int>(j)) = masks[i][j];
    }
  return table;
}

Dataset dataset_from_table(const CsvTable& table, const std::string& target,
                           const std::string& partner,
                           const std::vector<std::string>& adjusters) {
  const int t = find_column(table, target);
  const int p = find_column(table, partner);
  std::vector<int> adj;
  adj.reserve(adjusters.size());
  for (const std::string& a : adjusters) adj.push_back(find_column(table, a));
  return Dataset::make(table.values, table.observed, t, p, std::move(adj));
}

std::string format_double(double v) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_dataset_csv(const Dataset& data, const std::vector<std::string>& columns,
                       const std::string& path) {
  if (static_cast<int>(columns.size()) != data.p())
    throw error("write_dataset_csv: column name count mismatch");
  std::ofstream out(path);
  if (!out) throw error("cannot open '" + path + "' for writing");
  for (int j = 0; j < data.p(); ++j) out << (j ? "," : "") << columns[j];
  out << "\n";
  for (int i = 0; i < data.n_rows(); ++i) {
    for (int j = 0; j < data.p(); ++j) {
      if (j) out << ",";
      if (data.observed(i, j)) out << format_double(data.values(i, j));
    }
    out << "\n";
  }
}

}  // namespace mnarcor
