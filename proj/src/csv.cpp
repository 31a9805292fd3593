#include "znqed/csv.hpp"

#include <fstream>
#include <sstream>

#include "znqed/config.hpp"

namespace znqed {

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    if (!out.good()) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw IoError("cannot move " + tmp.string() + " into place: " +
                  ec.message());
}

void write_scalar_csv(const std::filesystem::path& path,
                      std::span<const double> times, const std::string& name,
                      std::span<const double> values) {
  if (times.size() != values.size())
    throw std::invalid_argument("scalar series misaligned with times");
  std::string out = "time," + name + "\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    out += format_double(times[i]);
    out += ',';
    out += format_double(values[i]);
    out += '\n';
  }
  write_text_file(path, out);
}

void write_matrix_csv(const std::filesystem::path& path,
                      std::span<const double> times,
                      const std::string& prefix,
                      const std::vector<std::vector<double>>& rows) {
  if (times.size() != rows.size())
    throw std::invalid_argument("matrix series misaligned with times");
  const std::size_t width = rows.empty() ? 0 : rows.front().size();
  std::string out = "time";
  for (std::size_t j = 0; j < width; ++j)
    out += "," + prefix + "=" + std::to_string(j + 1);
  out += '\n';
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (rows[i].size() != width)
      throw std::invalid_argument("ragged matrix series");
    out += format_double(times[i]);
    for (double v : rows[i]) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

std::vector<double> CsvTable::column(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] != name) continue;
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[j]);
    return out;
  }
  throw IoError("CSV has no column '" + name + "'");
}

bool CsvTable::has_column(const std::string& name) const {
  for (const auto& c : columns)
    if (c == name) return true;
  return false;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line))
    throw IoError(path.string() + ": empty CSV");
  std::istringstream header(line);
  std::string cell;
  while (std::getline(header, cell, ',')) table.columns.push_back(cell);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::vector<double> row;
    while (std::getline(fields, cell, ','))
      row.push_back(
          parse_double(cell, path.string() + ":" + std::to_string(line_no)));
    if (row.size() != table.columns.size())
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": ragged row");
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace znqed
