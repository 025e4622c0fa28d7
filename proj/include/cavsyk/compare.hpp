#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cavsyk/ensemble.hpp"

namespace cavsyk {

struct ComparisonRow {
  std::string name;
  std::string model;
  double delta_omega_tilde = 0;
  std::optional<double> t_star;
  std::optional<double> rate_ratio;  // (1/t*) / (1/t*_ref)
  std::optional<double> t_r;         // rescaled to the reference Heisenberg time
  std::optional<double> t_H;
  std::optional<double> eps_r;
};

struct ComparisonReport {
  std::string reference;
  std::optional<double> t_star_ref, t_r_ref, t_H_ref;
  std::vector<ComparisonRow> rows;
  std::optional<PowerLaw> alpha;  // eps_r ~ (1/delta_omega_tilde)^(-alpha)
  std::string alpha_note;

  // Writes fig3_inset.csv and fig4_inset.csv.
  void write(const std::filesystem::path& dir) const;
};

ComparisonReport compare_runs(const std::vector<RunManifest>& runs, const RunManifest& reference);

// Figure-data CSVs for the coupling histogram, OTOC and SFF panels of one run.
void export_figures(const RunManifest& run, const std::filesystem::path& dir);

}  // namespace cavsyk
