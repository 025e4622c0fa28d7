#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cavsyk/config.hpp"
#include "cavsyk/couplings.hpp"
#include "cavsyk/diagnostics.hpp"

namespace cavsyk {

inline constexpr const char* kVersion = "cavsyk 1.0.0";

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

// Seed of realization `index`: output index+1 of SplitMix64 seeded with master_seed,
// mix64(master + (index + 1) * 0x9E3779B97F4A7C15).
std::uint64_t split_seed(std::uint64_t master_seed, std::uint64_t index);

struct RealizationRecord {
  int index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double J = 0;
  std::optional<PseudoVoigtFit> fit;
  double e_min = 0, e_max = 0;
  int excluded_degenerate = 0;
};

struct Extraction {
  std::optional<double> t_star;
  std::string t_star_error;
  std::optional<RampResult> ramp;
  std::string ramp_error;
};

struct RunManifest {
  RunConfig config;
  std::filesystem::path dir;
  std::vector<RealizationRecord> realizations;
  bool partial = false;
  Extraction extraction;
  int rho_count = 0;
  double rho_mean = 0, rho_std = 0;
  std::optional<PseudoVoigtFit> pooled_fit;
  std::optional<double> ks_goe, ks_poisson;
  int spacing_count = 0;
  double wall_seconds = 0;
  std::string version = kVersion;

  int succeeded() const;
  std::filesystem::path aggregate(const std::string& name) const {
    return dir / "aggregates" / (name + ".csv");
  }
};

nlohmann::json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& dir);
RunManifest load_manifest(const std::filesystem::path& path);

struct RunOptions {
  // Processes realizations in a permuted order; results must not depend on it.
  std::optional<std::uint64_t> schedule_seed;
  // Called after each realization completes (from worker threads, serialized).
  std::function<void(const RealizationRecord&)> progress;
};

// Resolves the output directory from the config and CAVSYK_OUTPUT_ROOT.
std::filesystem::path resolve_output_dir(const RunConfig& config);

RunManifest run_ensemble(const RunConfig& config, const RunOptions& options = {});

// Time grids used by a run, derived from its config.
TimeGrid otoc_times(const RunConfig& config);
TimeGrid sff_times(const RunConfig& config);

}  // namespace cavsyk
