#include "cavsyk/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "cavsyk/csv.hpp"
#include "cavsyk/disorder.hpp"
#include "cavsyk/errors.hpp"
#include "cavsyk/syk.hpp"

namespace cavsyk {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t split_seed(std::uint64_t master_seed, std::uint64_t index) {
  return mix64(master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

int RunManifest::succeeded() const {
  return int(std::count_if(realizations.begin(), realizations.end(),
                           [](const RealizationRecord& r) { return r.ok; }));
}

TimeGrid otoc_times(const RunConfig& c) {
  TimeGrid g = log_time_grid(c.otoc.t_min, c.otoc.t_max, c.otoc.per_decade);
  if (c.otoc.include_zero) {
    VectorXd t(g.t.size() + 1);
    t << 0.0, g.t;
    g.t = t;
  }
  return g;
}

TimeGrid sff_times(const RunConfig& c) {
  double D = double(enumerate_sector(c.N, c.filling()).dim());
  return log_time_grid(c.sff.t_min, c.sff.t_max_factor * 2 * D, c.sff.per_decade);
}

fs::path resolve_output_dir(const RunConfig& c) {
  if (!c.output_dir.empty()) return c.output_dir;
  const char* root = std::getenv("CAVSYK_OUTPUT_ROOT");
  return fs::path(root && *root ? root : "runs") / c.name;
}

namespace {

struct Shared {
  GridSpec grid;
  TrapModeSet trap;
  CavityModeSet cavity;
  FockSector sector;
  TimeGrid otoc_t, sff_t;
};

struct Outcome {
  RealizationRecord rec;
  VectorXcd otoc;
  VectorXd sff;
  std::vector<double> spacings;
  std::vector<double> samples;
};

template <typename Scalar>
CouplingTensor<Scalar> make_tensor(const RunConfig& c, const Shared& sh, std::uint64_t seed) {
  switch (c.model) {
    case Provenance::effective: {
      SpeckleField sp = generate_speckle(sh.grid, c.grains, seed);
      DetuningRatioField det = detuning_ratio(sp, c.disorder_strength);
      DriveProfile drive =
          c.drive == "plane_wave" ? DriveProfile::plane_wave(c.kd) : DriveProfile::uniform();
      auto table = compute_integrals<Scalar>(sh.grid, sh.trap, sh.cavity, det, drive);
      auto t = compute_coupling_tensor(table, c.delta_omega_tilde, c.M);
      t.zeta = c.zeta;
      return normalize_couplings(t);
    }
    case Provenance::syk_gauss_real:
    case Provenance::syk_gauss_complex:
      return normalize_couplings(sample_syk_gaussian<Scalar>(c.N, c.J, seed));
    case Provenance::syk_cauchy:
      if constexpr (!is_complex_v<Scalar>)
        return normalize_couplings(sample_syk_cauchy(c.N, c.gamma, c.f, seed));
      break;
  }
  throw InvalidArgument("model and scalar type disagree");
}

template <typename Scalar>
void write_couplings(const fs::path& path, const CouplingTensor<Scalar>& t) {
  Table tab;
  tab.header = {"i1", "i2", "j1", "j2", "re", "im"};
  for (int i1 = 1; i1 < t.N; ++i1)
    for (int i2 = 0; i2 < i1; ++i2)
      for (int j1 = 1; j1 < t.N; ++j1)
        for (int j2 = 0; j2 < j1; ++j2) {
          Scalar v = t.pairs(pair_index(i1, i2), pair_index(j1, j2));
          tab.rows.push_back({double(i1), double(i2), double(j1), double(j2), std::real(v),
                              std::imag(cplx(v))});
        }
  write_table(path, tab);
}

fs::path realization_dir(const fs::path& dir, int index) {
  char name[16];
  std::snprintf(name, sizeof name, "r%04d", index);
  return dir / "realizations" / name;
}

template <typename Scalar>
Outcome run_one(const RunConfig& c, const Shared& sh, const fs::path& dir, int index) {
  Outcome out;
  out.rec.index = index;
  out.rec.seed = split_seed(c.master_seed, std::uint64_t(index));
  try {
    auto tensor = make_tensor<Scalar>(c, sh, out.rec.seed);
    out.rec.J = tensor.J;
    if (c.fit_couplings) {
      out.samples = independent_samples(tensor);
      try {
        out.rec.fit = fit_pseudo_voigt(out.samples);
      } catch (const Error& e) {
        out.rec.error = std::string("coupling fit: ") + e.what();
      }
    }
    auto H = build_effective_hamiltonian(tensor, sh.sector, c.model, out.rec.seed);
    auto spec = diagonalize(H, c.otoc.enabled);
    out.rec.e_min = spec.energies.minCoeff();
    out.rec.e_max = spec.energies.maxCoeff();
    if (c.otoc.enabled) out.otoc = compute_otoc(spec, c.otoc.i, c.otoc.j, sh.otoc_t).F;
    if (c.sff.enabled) {
      VectorXd E = c.sff.unfold ? unfold_spectrum(spec.energies) : spec.energies;
      out.sff = compute_sff(E, sh.sff_t).S;
    }
    if (c.spacing.enabled) {
      Spacings s = unfolded_spacings(spec.energies, c.spacing.keep_fraction, c.spacing.window);
      out.spacings = std::move(s.s);
      out.rec.excluded_degenerate = s.excluded_degenerate;
    }
    if (c.write_realizations) {
      fs::path rd = realization_dir(dir, index);
      write_couplings(rd / "couplings.csv", tensor);
      VectorXd idx = VectorXd::LinSpaced(spec.energies.size(), 0, double(spec.energies.size() - 1));
      write_csv(rd / "eigenvalues.csv", {"realization", "index", "eigenvalue"},
                {VectorXd::Constant(idx.size(), index), idx, spec.energies});
      if (c.otoc.enabled)
        write_csv(rd / "otoc.csv", {"t", "re_F", "im_F"},
                  {sh.otoc_t.t, out.otoc.real(), out.otoc.imag()});
      if (c.sff.enabled) write_csv(rd / "sff.csv", {"t", "S"}, {sh.sff_t.t, out.sff});
    }
    out.rec.ok = true;
  } catch (const std::exception& e) {
    out.rec.ok = false;
    out.rec.error = e.what();
    out.otoc.resize(0);
    out.sff.resize(0);
    out.spacings.clear();
    out.samples.clear();
  }
  return out;
}

json fit_json(const PseudoVoigtFit& f) {
  return {{"rho", f.rho},         {"sigma", f.sigma},          {"xbar", f.xbar},
          {"fit_error", f.fit_error}, {"rho_binning", f.rho_binning}, {"bin_width", f.bin_width},
          {"bins", f.bins}};
}

PseudoVoigtFit fit_from_json(const json& j) {
  PseudoVoigtFit f;
  f.rho = j.at("rho").get<double>();
  f.sigma = j.at("sigma").get<double>();
  f.xbar = j.at("xbar").get<double>();
  f.fit_error = j.at("fit_error").get<double>();
  f.rho_binning = j.value("rho_binning", 0.0);
  f.bin_width = j.value("bin_width", 0.0);
  f.bins = j.value("bins", 0);
  return f;
}

template <typename T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> opt_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

void aggregate(RunManifest& m, std::vector<Outcome>& outcomes, const Shared& sh) {
  const RunConfig& c = m.config;
  std::vector<const Outcome*> good;
  for (const auto& o : outcomes)
    if (o.rec.ok) good.push_back(&o);
  if (good.empty()) return;
  const double n = double(good.size());
  fs::path agg = m.dir / "aggregates";

  if (c.otoc.enabled) {
    VectorXcd F = VectorXcd::Zero(sh.otoc_t.t.size());
    for (const auto* o : good) F += o->otoc;
    F /= n;
    write_csv(agg / "otoc.csv", {"t", "re_F", "im_F"}, {sh.otoc_t.t, F.real(), F.imag()});
    try {
      m.extraction.t_star = extract_decay_time(sh.otoc_t.t, F.real());
    } catch (const Error& e) {
      m.extraction.t_star_error = e.what();
    }
  }
  if (c.sff.enabled) {
    SffSeries s;
    s.t = sh.sff_t.t;
    s.D = sh.sector.dim();
    s.S = VectorXd::Zero(s.t.size());
    for (const auto* o : good) s.S += o->sff;
    s.S /= n;
    write_csv(agg / "sff.csv", {"t", "S"}, {s.t, s.S});
    RampOptions opt;
    opt.threshold = c.sff.threshold;
    opt.smoothing = c.sff.smoothing;
    opt.ramp_lo = c.sff.ramp_lo;
    opt.ramp_hi = c.sff.ramp_hi;
    opt.plateau_lo = c.sff.plateau_lo;
    try {
      m.extraction.ramp = extract_ramp_and_heisenberg(s, opt);
    } catch (const Error& e) {
      m.extraction.ramp_error = e.what();
    }
  }
  if (c.spacing.enabled) {
    std::vector<double> pooled;
    for (const auto* o : good) pooled.insert(pooled.end(), o->spacings.begin(), o->spacings.end());
    if (!pooled.empty()) {
      SpacingStats st = spacing_statistics(pooled);
      m.ks_goe = st.ks_goe;
      m.ks_poisson = st.ks_poisson;
      m.spacing_count = int(pooled.size());
      VectorXd w = st.centres.unaryExpr([](double s) { return wigner_density(s); });
      VectorXd p = (-st.centres.array()).exp().matrix();
      write_csv(agg / "spacing_hist.csv", {"s", "density", "wigner", "poisson"},
                {st.centres, st.density, w, p});
    }
  }
  if (c.fit_couplings) {
    std::vector<double> rhos, pooled;
    for (const auto* o : good) {
      if (o->rec.fit) rhos.push_back(o->rec.fit->rho);
      pooled.insert(pooled.end(), o->samples.begin(), o->samples.end());
    }
    m.rho_count = int(rhos.size());
    if (!rhos.empty()) {
      double mean = std::accumulate(rhos.begin(), rhos.end(), 0.0) / double(rhos.size());
      double ss = 0;
      for (double r : rhos) ss += (r - mean) * (r - mean);
      m.rho_mean = mean;
      m.rho_std = rhos.size() > 1 ? std::sqrt(ss / double(rhos.size() - 1)) : 0.0;
      write_csv(agg / "rho.csv", {"rho"},
                {Eigen::Map<const VectorXd>(rhos.data(), Index(rhos.size()))});
    }
    if (pooled.size() >= 100) {
      try {
        m.pooled_fit = fit_pseudo_voigt(pooled);
        double lo = *std::min_element(pooled.begin(), pooled.end());
        auto [x, d] = density_histogram(pooled, lo, m.pooled_fit->bin_width, m.pooled_fit->bins);
        const auto& f = *m.pooled_fit;
        VectorXd pv = x.unaryExpr(
            [&](double v) { return pseudo_voigt_density(v, f.rho, f.sigma, f.xbar); });
        write_csv(agg / "couplings_hist.csv", {"x", "density", "pseudo_voigt"}, {x, d, pv});
      } catch (const Error&) {
      }
    }
  }
}

}  // namespace

json manifest_to_json(const RunManifest& m) {
  json reals = json::array();
  for (const auto& r : m.realizations) {
    json j = {{"index", r.index}, {"seed", r.seed}, {"ok", r.ok}, {"J", r.J},
              {"e_min", r.e_min}, {"e_max", r.e_max},
              {"excluded_degenerate", r.excluded_degenerate}};
    if (!r.error.empty()) j["error"] = r.error;
    if (r.fit) j["fit"] = fit_json(*r.fit);
    reals.push_back(j);
  }
  json ex = {{"t_star", opt_json(m.extraction.t_star)}};
  if (!m.extraction.t_star_error.empty()) ex["t_star_error"] = m.extraction.t_star_error;
  if (m.extraction.ramp) {
    const auto& r = *m.extraction.ramp;
    ex["t_r"] = r.t_r;
    ex["t_H"] = r.t_H;
    ex["t_dip"] = r.t_dip;
    ex["ramp_fit"] = {{"slope", r.ramp_slope}, {"intercept", r.ramp_intercept},
                      {"lo", r.ramp_lo}, {"hi", r.ramp_hi}};
    ex["plateau_fit"] = {{"slope", r.plateau_slope}, {"intercept", r.plateau_intercept},
                         {"lo", r.plateau_lo}};
  }
  if (!m.extraction.ramp_error.empty()) ex["ramp_error"] = m.extraction.ramp_error;
  json agg = json::object();
  for (const char* name : {"otoc", "sff", "spacing_hist", "rho", "couplings_hist"})
    if (fs::exists(m.aggregate(name))) agg[name] = "aggregates/" + std::string(name) + ".csv";
  return {
      {"version", m.version},
      {"config", config_to_json(m.config)},
      {"status", m.partial ? "partial" : "complete"},
      {"succeeded", m.succeeded()},
      {"realizations", reals},
      {"aggregates", agg},
      {"extraction", ex},
      {"couplings",
       {{"rho_mean", m.rho_mean},
        {"rho_std", m.rho_std},
        {"rho_count", m.rho_count},
        {"pooled_fit", m.pooled_fit ? fit_json(*m.pooled_fit) : json(nullptr)}}},
      {"level_statistics",
       {{"ks_goe", opt_json(m.ks_goe)},
        {"ks_poisson", opt_json(m.ks_poisson)},
        {"spacings", m.spacing_count}}},
      {"timing", {{"wall_seconds", m.wall_seconds}}},
  };
}

RunManifest manifest_from_json(const json& j, const fs::path& dir) {
  RunManifest m;
  m.dir = dir;
  m.config = config_from_json(j.at("config"));
  m.version = j.value("version", "");
  m.partial = j.value("status", "complete") != "complete";
  for (const auto& r : j.at("realizations")) {
    RealizationRecord rec;
    rec.index = r.at("index").get<int>();
    rec.seed = r.at("seed").get<std::uint64_t>();
    rec.ok = r.at("ok").get<bool>();
    rec.error = r.value("error", "");
    rec.J = r.value("J", 0.0);
    rec.e_min = r.value("e_min", 0.0);
    rec.e_max = r.value("e_max", 0.0);
    rec.excluded_degenerate = r.value("excluded_degenerate", 0);
    if (r.contains("fit")) rec.fit = fit_from_json(r.at("fit"));
    m.realizations.push_back(rec);
  }
  const json& ex = j.at("extraction");
  m.extraction.t_star = opt_from<double>(ex, "t_star");
  m.extraction.t_star_error = ex.value("t_star_error", "");
  m.extraction.ramp_error = ex.value("ramp_error", "");
  if (ex.contains("t_r")) {
    RampResult r;
    r.t_r = ex.at("t_r").get<double>();
    r.t_H = ex.at("t_H").get<double>();
    r.t_dip = ex.at("t_dip").get<double>();
    const json& rf = ex.at("ramp_fit");
    r.ramp_slope = rf.at("slope").get<double>();
    r.ramp_intercept = rf.at("intercept").get<double>();
    r.ramp_lo = rf.at("lo").get<double>();
    r.ramp_hi = rf.at("hi").get<double>();
    const json& pf = ex.at("plateau_fit");
    r.plateau_slope = pf.at("slope").get<double>();
    r.plateau_intercept = pf.at("intercept").get<double>();
    r.plateau_lo = pf.at("lo").get<double>();
    m.extraction.ramp = r;
  }
  const json& cp = j.at("couplings");
  m.rho_mean = cp.value("rho_mean", 0.0);
  m.rho_std = cp.value("rho_std", 0.0);
  m.rho_count = cp.value("rho_count", 0);
  if (cp.contains("pooled_fit") && !cp.at("pooled_fit").is_null())
    m.pooled_fit = fit_from_json(cp.at("pooled_fit"));
  const json& ls = j.at("level_statistics");
  m.ks_goe = opt_from<double>(ls, "ks_goe");
  m.ks_poisson = opt_from<double>(ls, "ks_poisson");
  m.spacing_count = ls.value("spacings", 0);
  m.wall_seconds = j.at("timing").value("wall_seconds", 0.0);
  return m;
}

RunManifest load_manifest(const fs::path& path) {
  fs::path file = fs::is_directory(path) ? path / "manifest.json" : path;
  std::ifstream in(file);
  if (!in) throw InvalidArgument("cannot open manifest " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument(file.string() + ": " + e.what());
  }
  return manifest_from_json(j, file.parent_path());
}

RunManifest run_ensemble(const RunConfig& config, const RunOptions& options) {
  config.validate();
  auto start = std::chrono::steady_clock::now();
  RunManifest m;
  m.config = config;
  m.dir = resolve_output_dir(config);
  fs::create_directories(m.dir);
  // Stale aggregates from an earlier run must not survive a partial rerun.
  fs::remove_all(m.dir / "aggregates");
  fs::remove_all(m.dir / "realizations");

  Shared sh;
  sh.sector = enumerate_sector(config.N, config.filling());
  if (config.otoc.enabled) sh.otoc_t = otoc_times(config);
  if (config.sff.enabled) sh.sff_t = sff_times(config);
  if (config.model == Provenance::effective) {
    sh.grid = make_grid(config.L, config.Nx);
    sh.trap = solve_trap_modes(sh.grid, config.N);
    sh.cavity = make_cavity_modes(sh.grid, config.zeta, config.M);
  }

  const int R = config.realizations;
  std::vector<int> order(R);
  std::iota(order.begin(), order.end(), 0);
  if (options.schedule_seed) {
    std::mt19937_64 rng(*options.schedule_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::vector<Outcome> outcomes(R);
  std::atomic<int> next{0};
  std::mutex progress_lock;
  const bool complex = config.complex_couplings();
  auto worker = [&] {
    for (int k = next++; k < R; k = next++) {
      int idx = order[k];
      outcomes[idx] = complex ? run_one<cplx>(config, sh, m.dir, idx)
                              : run_one<double>(config, sh, m.dir, idx);
      if (options.progress) {
        std::lock_guard lock(progress_lock);
        options.progress(outcomes[idx].rec);
      }
    }
  };
  int workers = config.workers > 0 ? config.workers
                                   : std::max(1, int(std::thread::hardware_concurrency()));
  workers = std::min(workers, R);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (const auto& o : outcomes) {
    m.realizations.push_back(o.rec);
    if (!o.rec.ok) m.partial = true;
  }
  aggregate(m, outcomes, sh);
  m.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ofstream(m.dir / "manifest.json") << manifest_to_json(m).dump(2) << '\n';
  return m;
}

}  // namespace cavsyk
