#pragma once

// CSV persistence for sampled series. Scalar files carry columns
// `time,<name>`; matrix files carry `time` plus one column per
// site/link. Values are written with 17 significant digits so a
// round-trip through disk is exact. Writes go through a temp file and a
// rename.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "znqed/errors.hpp"

namespace znqed {

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

void write_scalar_csv(const std::filesystem::path& path,
                      std::span<const double> times, const std::string& name,
                      std::span<const double> values);

// Column headers become `<prefix>=1..<prefix>=K`.
void write_matrix_csv(const std::filesystem::path& path,
                      std::span<const double> times,
                      const std::string& prefix,
                      const std::vector<std::vector<double>>& rows);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // rows[i][j] pairs with columns[j]

  std::vector<double> column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace znqed
