#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cavsyk/types.hpp"

namespace cavsyk {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  Index column(const std::string& name) const;
  VectorXd col(const std::string& name) const;
};

// Header row, fixed column order, round-trip precision decimals.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<VectorXd>& columns);
void write_table(const std::filesystem::path& path, const Table& table);
Table read_csv(const std::filesystem::path& path);

std::string format_double(double v);

}  // namespace cavsyk
