#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "cavsyk/errors.hpp"
#include "cavsyk/fock.hpp"

namespace cavsyk {

struct OtocConfig {
  bool enabled = true;
  bool include_zero = true;  // prepend t = 0 to the log grid
  int i = 0, j = 1;
  double t_min = 1e-2, t_max = 1e2;
  int per_decade = 200;
};

struct SffConfig {
  bool enabled = true;
  bool unfold = true;
  double t_min = 1e-1;
  double t_max_factor = 10;  // grid ends at t_max_factor * 2D
  int per_decade = 200;
  double threshold = 0.01;
  int smoothing = 1;
  std::optional<double> ramp_lo, ramp_hi, plateau_lo;
};

struct SpacingConfig {
  bool enabled = true;
  double keep_fraction = 0.8;
  int window = 21;
};

struct RunConfig {
  std::string name = "run";
  Provenance model = Provenance::effective;
  int N = 10;
  int Np = -1;  // -1 means half filling
  double delta_omega_tilde = 0.1;
  double zeta = 1;
  int M = 240;
  double L = 10;
  int Nx = 200;
  double grains = 17;
  double disorder_strength = 1;
  std::string drive = "uniform";  // uniform | plane_wave
  double kd = 0;
  double gamma = 0.2, f = 0.975;
  double J = 1;
  int realizations = 10;
  std::uint64_t master_seed = 1;
  OtocConfig otoc;
  SffConfig sff;
  SpacingConfig spacing;
  bool fit_couplings = true;
  bool write_realizations = true;
  int workers = 0;  // 0 means all available cores
  std::string output_dir;

  int filling() const { return Np < 0 ? N / 2 : Np; }
  bool complex_couplings() const {
    return model == Provenance::syk_gauss_complex ||
           (model == Provenance::effective && drive == "plane_wave");
  }
  void validate() const;
};

// Raised for malformed or inconsistent configuration input.
struct ConfigError : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);

}  // namespace cavsyk
