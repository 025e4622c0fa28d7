// Command-line front end: run ensembles, compare them against a reference,
// and export figure-data tables.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "cavsyk/compare.hpp"
#include "cavsyk/ensemble.hpp"
#include "cavsyk/errors.hpp"

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfigError = 2, kPartial = 3, kBadInput = 4 };

std::string show(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

void print_report(const cavsyk::ComparisonReport& rep) {
  std::cout << "reference " << rep.reference << ": t*=" << show(rep.t_star_ref)
            << " t_r=" << show(rep.t_r_ref) << " t_H=" << show(rep.t_H_ref) << '\n';
  for (const auto& r : rep.rows)
    std::cout << r.name << " (" << r.model << ", dw=" << r.delta_omega_tilde
              << "): t*=" << show(r.t_star) << " rate_ratio=" << show(r.rate_ratio)
              << " t_r=" << show(r.t_r) << " eps_r=" << show(r.eps_r) << '\n';
  if (rep.alpha)
    std::cout << "alpha = " << rep.alpha->alpha << " +- " << rep.alpha->alpha_stderr << '\n';
  else
    std::cout << "alpha: " << rep.alpha_note << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity-mediated SYK couplings: disorder ensembles and chaos diagnostics"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an ensemble from a config or manifest");
  std::string config_path, output;
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations, workers;
  bool quiet = false;
  run->add_option("config", config_path, "Config JSON, or a manifest to reproduce")->required();
  run->add_option("--seed", seed, "Override master seed");
  run->add_option("-R,--realizations", realizations, "Override realization count");
  run->add_option("-j,--workers", workers, "Override worker count");
  run->add_option("-o,--output", output, "Output directory (default $CAVSYK_OUTPUT_ROOT/<name>)");
  run->add_flag("-q,--quiet", quiet, "No per-realization progress");

  auto* cmp = app.add_subcommand("compare", "Compare runs against a reference run");
  std::vector<std::string> manifests;
  std::string reference, out_dir;
  cmp->add_option("manifests", manifests, "Run manifests or run directories")->required();
  cmp->add_option("-r,--reference", reference, "Reference run (e.g. SYK)")->required();
  cmp->add_option("-o,--out", out_dir, "Directory for inset tables");

  auto* exp = app.add_subcommand("export", "Write figure-data CSVs from run manifests");
  std::vector<std::string> exp_manifests;
  std::string exp_reference, exp_out = "figures";
  exp->add_option("manifests", exp_manifests, "Run manifests or run directories")->required();
  exp->add_option("-r,--reference", exp_reference, "Reference run; also writes inset tables");
  exp->add_option("-o,--out", exp_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) {
      cavsyk::RunConfig cfg = cavsyk::load_config(config_path);
      if (seed) cfg.master_seed = *seed;
      if (realizations) cfg.realizations = *realizations;
      if (workers) cfg.workers = *workers;
      if (!output.empty()) cfg.output_dir = output;
      cavsyk::RunOptions opts;
      if (!quiet)
        opts.progress = [](const cavsyk::RealizationRecord& r) {
          std::cerr << "realization " << r.index << (r.ok ? " ok" : " FAILED: " + r.error)
                    << '\n';
        };
      auto m = cavsyk::run_ensemble(cfg, opts);
      std::cout << "wrote " << (m.dir / "manifest.json").string() << " (" << m.succeeded() << "/"
                << m.realizations.size() << " realizations)\n";
      if (m.extraction.t_star) std::cout << "t* = " << *m.extraction.t_star << '\n';
      if (m.extraction.ramp)
        std::cout << "t_r = " << m.extraction.ramp->t_r << ", t_H = " << m.extraction.ramp->t_H
                  << '\n';
      if (m.rho_count) std::cout << "rho = " << m.rho_mean << " +- " << m.rho_std << '\n';
      return m.partial ? kPartial : kOk;
    }
    if (*cmp) {
      std::vector<cavsyk::RunManifest> runs;
      for (const auto& p : manifests) runs.push_back(cavsyk::load_manifest(p));
      auto rep = cavsyk::compare_runs(runs, cavsyk::load_manifest(reference));
      print_report(rep);
      if (!out_dir.empty()) rep.write(out_dir);
      return kOk;
    }
    if (*exp) {
      std::vector<cavsyk::RunManifest> runs;
      for (const auto& p : exp_manifests) {
        runs.push_back(cavsyk::load_manifest(p));
        cavsyk::export_figures(runs.back(), std::filesystem::path(exp_out) / runs.back().config.name);
      }
      if (!exp_reference.empty())
        cavsyk::compare_runs(runs, cavsyk::load_manifest(exp_reference)).write(exp_out);
      std::cout << "wrote figure data to " << exp_out << '\n';
      return kOk;
    }
  } catch (const cavsyk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const cavsyk::InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
