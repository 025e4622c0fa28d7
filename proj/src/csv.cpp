#include "cavsyk/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "cavsyk/errors.hpp"

namespace cavsyk {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Index Table::column(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k)
    if (header[k] == name) return Index(k);
  throw InvalidArgument("CSV has no column '" + name + "'");
}

VectorXd Table::col(const std::string& name) const {
  Index c = column(name);
  VectorXd v(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) v[Index(r)] = rows[r][c];
  return v;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<VectorXd>& columns) {
  if (header.size() != columns.size()) throw InvalidArgument("CSV header and columns differ");
  Table t;
  t.header = header;
  Index n = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != n) throw InvalidArgument("CSV columns have unequal length");
  t.rows.resize(n);
  for (Index r = 0; r < n; ++r)
    for (const auto& c : columns) t.rows[r].push_back(c[r]);
  write_table(path, t);
}

void write_table(const std::filesystem::path& path, const Table& table) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  for (std::size_t k = 0; k < table.header.size(); ++k)
    out << (k ? "," : "") << table.header[k];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_double(row[k]);
    out << '\n';
  }
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  Table t;
  std::string line, cell;
  if (!std::getline(in, line)) throw InvalidArgument(path.string() + " is empty");
  std::stringstream hs(line);
  while (std::getline(hs, cell, ',')) t.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      double v = 0;
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc()) v = std::stod(cell);  // nan/inf spellings
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace cavsyk
