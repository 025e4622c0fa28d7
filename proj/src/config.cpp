#include "cavsyk/config.hpp"

#include <fstream>
#include <set>

namespace cavsyk {

using nlohmann::json;

namespace {

// Reads known keys into fields and rejects anything unrecognized.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + " must be an object");
  }

  template <typename T>
  void get(const char* key, T& field) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      field = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(where_ + key + ": " + e.what());
    }
  }

  template <typename T>
  void get(const char* key, std::optional<T>& field) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    T v{};
    get(key, v);
    field = v;
  }

  const json* section(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError("unknown config key " + where_ + it.key());
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

void RunConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  need(N >= 2 && N <= kDenseGuard, "N must lie in [2, 20]");
  need(filling() >= 0 && filling() <= N, "filling must lie in [0, N]");
  need(realizations >= 1, "realizations must be >= 1");
  need(workers >= 0, "workers must be >= 0");
  if (model == Provenance::effective) {
    need(delta_omega_tilde > 0, "delta_omega_tilde must be positive");
    need(zeta > 0, "zeta must be positive");
    need(M >= 0, "M must be non-negative");
    need(L > 0 && Nx >= 2, "grid needs L > 0 and Nx >= 2");
    need(grains > 0, "grains must be positive");
    need(disorder_strength >= 0, "disorder_strength must be non-negative");
    need(drive == "uniform" || drive == "plane_wave", "drive must be uniform or plane_wave");
  }
  if (model == Provenance::syk_cauchy) need(gamma > 0 && f > 0 && f < 1, "need gamma > 0, 0 < f < 1");
  if (model == Provenance::syk_gauss_real || model == Provenance::syk_gauss_complex)
    need(J > 0, "J must be positive");
  if (otoc.enabled) {
    need(otoc.i != otoc.j && otoc.i >= 0 && otoc.j >= 0 && otoc.i < N && otoc.j < N,
         "otoc modes must be distinct and < N");
    need(otoc.t_min > 0 && otoc.t_max > otoc.t_min && otoc.per_decade >= 1, "bad otoc time grid");
  }
  if (sff.enabled)
    need(sff.t_min > 0 && sff.t_max_factor > 0 && sff.per_decade >= 1 && sff.threshold > 0,
         "bad sff parameters");
  if (spacing.enabled)
    need(spacing.keep_fraction > 0 && spacing.keep_fraction <= 1 && spacing.window >= 1,
         "bad spacing parameters");
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  Reader r(j, "");
  std::string model = to_string(c.model);
  r.get("name", c.name);
  r.get("model", model);
  try {
    c.model = provenance_from_string(model);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  r.get("N", c.N);
  r.get("Np", c.Np);
  r.get("delta_omega_tilde", c.delta_omega_tilde);
  r.get("zeta", c.zeta);
  r.get("M", c.M);
  r.get("L", c.L);
  r.get("Nx", c.Nx);
  r.get("grains", c.grains);
  r.get("disorder_strength", c.disorder_strength);
  r.get("drive", c.drive);
  r.get("kd", c.kd);
  r.get("gamma", c.gamma);
  r.get("f", c.f);
  r.get("J", c.J);
  r.get("realizations", c.realizations);
  r.get("master_seed", c.master_seed);
  r.get("fit_couplings", c.fit_couplings);
  r.get("write_realizations", c.write_realizations);
  r.get("workers", c.workers);
  r.get("output_dir", c.output_dir);
  if (const json* o = r.section("otoc")) {
    Reader s(*o, "otoc.");
    s.get("enabled", c.otoc.enabled);
    s.get("include_zero", c.otoc.include_zero);
    s.get("i", c.otoc.i);
    s.get("j", c.otoc.j);
    s.get("t_min", c.otoc.t_min);
    s.get("t_max", c.otoc.t_max);
    s.get("per_decade", c.otoc.per_decade);
    s.finish();
  }
  if (const json* o = r.section("sff")) {
    Reader s(*o, "sff.");
    s.get("enabled", c.sff.enabled);
    s.get("unfold", c.sff.unfold);
    s.get("t_min", c.sff.t_min);
    s.get("t_max_factor", c.sff.t_max_factor);
    s.get("per_decade", c.sff.per_decade);
    s.get("threshold", c.sff.threshold);
    s.get("smoothing", c.sff.smoothing);
    s.get("ramp_lo", c.sff.ramp_lo);
    s.get("ramp_hi", c.sff.ramp_hi);
    s.get("plateau_lo", c.sff.plateau_lo);
    s.finish();
  }
  if (const json* o = r.section("spacing")) {
    Reader s(*o, "spacing.");
    s.get("enabled", c.spacing.enabled);
    s.get("keep_fraction", c.spacing.keep_fraction);
    s.get("window", c.spacing.window);
    s.finish();
  }
  r.finish();
  c.validate();
  return c;
}

json config_to_json(const RunConfig& c) {
  return {
      {"name", c.name},
      {"model", to_string(c.model)},
      {"N", c.N},
      {"Np", c.filling()},
      {"delta_omega_tilde", c.delta_omega_tilde},
      {"zeta", c.zeta},
      {"M", c.M},
      {"L", c.L},
      {"Nx", c.Nx},
      {"grains", c.grains},
      {"disorder_strength", c.disorder_strength},
      {"drive", c.drive},
      {"kd", c.kd},
      {"gamma", c.gamma},
      {"f", c.f},
      {"J", c.J},
      {"realizations", c.realizations},
      {"master_seed", c.master_seed},
      {"fit_couplings", c.fit_couplings},
      {"write_realizations", c.write_realizations},
      {"workers", c.workers},
      {"output_dir", c.output_dir},
      {"otoc",
       {{"enabled", c.otoc.enabled},
        {"include_zero", c.otoc.include_zero},
        {"i", c.otoc.i},
        {"j", c.otoc.j},
        {"t_min", c.otoc.t_min},
        {"t_max", c.otoc.t_max},
        {"per_decade", c.otoc.per_decade}}},
      {"sff",
       {{"enabled", c.sff.enabled},
        {"unfold", c.sff.unfold},
        {"t_min", c.sff.t_min},
        {"t_max_factor", c.sff.t_max_factor},
        {"per_decade", c.sff.per_decade},
        {"threshold", c.sff.threshold},
        {"smoothing", c.sff.smoothing},
        {"ramp_lo", opt(c.sff.ramp_lo)},
        {"ramp_hi", opt(c.sff.ramp_hi)},
        {"plateau_lo", opt(c.sff.plateau_lo)}}},
      {"spacing",
       {{"enabled", c.spacing.enabled},
        {"keep_fraction", c.spacing.keep_fraction},
        {"window", c.spacing.window}}},
  };
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  // A manifest carries its resolved config under "config".
  if (j.contains("config") && j.contains("realizations") && j.at("realizations").is_array())
    return config_from_json(j.at("config"));
  return config_from_json(j);
}

}  // namespace cavsyk
