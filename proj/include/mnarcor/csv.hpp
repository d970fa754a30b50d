#ifndef MNARCOR_CSV_HPP
#define MNARCOR_CSV_HPP

#include <string>
#include <vector>

#include "mnarcor/dataset.hpp"

namespace mnarcor {

// Comma-separated, header row required, '.' decimal point, UTF-8.
// Empty cells and "NA"/"NaN" (case-insensitive) are missing.

struct CsvTable {
  std::vector<std::string> columns;
  Eigen::MatrixXd values;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> observed;
};

// Throws error on an unreadable file, design_error on malformed content.
CsvTable read_csv(const std::string& path);

// Resolves the named roles and builds a validated Dataset.
Dataset dataset_from_table(const CsvTable& table, const std::string& target,
                           const std::string& partner,
                           const std::vector<std::string>& adjusters);

// Full-precision round-trip output (17 significant digits); missing
// cells are written as empty fields.
void write_dataset_csv(const Dataset& data, const std::vector<std::string>& columns,
                       const std::string& path);

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace mnarcor

#endif
