#include "cavsyk/compare.hpp"

#include <cmath>

#include "cavsyk/csv.hpp"
#include "cavsyk/errors.hpp"

namespace cavsyk {

namespace fs = std::filesystem;

namespace {

void check_compatible(const RunConfig& a, const RunConfig& ref) {
  if (a.N != ref.N || a.filling() != ref.filling())
    throw InvalidArgument("run '" + a.name + "' has a different N or filling than the reference");
  bool otoc_same = a.otoc.enabled == ref.otoc.enabled &&
                   (!a.otoc.enabled || (a.otoc.include_zero == ref.otoc.include_zero &&
                                        a.otoc.t_min == ref.otoc.t_min &&
                                        a.otoc.t_max == ref.otoc.t_max &&
                                        a.otoc.per_decade == ref.otoc.per_decade &&
                                        a.otoc.i == ref.otoc.i && a.otoc.j == ref.otoc.j));
  bool sff_same = a.sff.enabled == ref.sff.enabled &&
                  (!a.sff.enabled || (a.sff.t_min == ref.sff.t_min &&
                                      a.sff.t_max_factor == ref.sff.t_max_factor &&
                                      a.sff.per_decade == ref.sff.per_decade &&
                                      a.sff.unfold == ref.sff.unfold));
  if (!otoc_same || !sff_same)
    throw InvalidArgument("run '" + a.name + "' uses time grids incompatible with the reference");
}

VectorXd opt_vec(const std::vector<std::optional<double>>& v) {
  VectorXd out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[Index(k)] = v[k].value_or(std::nan(""));
  return out;
}

}  // namespace

ComparisonReport compare_runs(const std::vector<RunManifest>& runs, const RunManifest& reference) {
  ComparisonReport rep;
  rep.reference = reference.config.name;
  rep.t_star_ref = reference.extraction.t_star;
  if (reference.extraction.ramp) {
    rep.t_r_ref = reference.extraction.ramp->t_r;
    rep.t_H_ref = reference.extraction.ramp->t_H;
  }
  std::vector<double> xs, ys;
  for (const auto& run : runs) {
    check_compatible(run.config, reference.config);
    ComparisonRow row;
    row.name = run.config.name;
    row.model = to_string(run.config.model);
    row.delta_omega_tilde = run.config.delta_omega_tilde;
    row.t_star = run.extraction.t_star;
    if (row.t_star && rep.t_star_ref) row.rate_ratio = *rep.t_star_ref / *row.t_star;
    if (run.extraction.ramp && rep.t_r_ref) {
      const auto& r = *run.extraction.ramp;
      row.t_H = r.t_H;
      row.t_r = r.t_r * (*rep.t_H_ref / r.t_H);
      row.eps_r = ramp_error(*row.t_r, *rep.t_r_ref);
    }
    if (run.config.model == Provenance::effective && row.eps_r && *row.eps_r > 0) {
      xs.push_back(1.0 / row.delta_omega_tilde);
      ys.push_back(*row.eps_r);
    }
    rep.rows.push_back(row);
  }
  if (xs.size() >= 3) {
    try {
      rep.alpha = fit_power_law(xs, ys);
    } catch (const InvalidArgument& e) {
      rep.alpha_note = e.what();
    }
  } else {
    rep.alpha_note = "fewer than 3 effective-model runs with a positive ramp error";
  }
  return rep;
}

void ComparisonReport::write(const fs::path& dir) const {
  std::vector<std::optional<double>> dw, ts, rr, tr, th, er;
  for (const auto& r : rows) {
    dw.push_back(r.delta_omega_tilde);
    ts.push_back(r.t_star);
    rr.push_back(r.rate_ratio);
    tr.push_back(r.t_r);
    th.push_back(r.t_H);
    er.push_back(r.eps_r);
  }
  write_csv(dir / "fig3_inset.csv", {"delta_omega_tilde", "t_star", "rate_ratio"},
            {opt_vec(dw), opt_vec(ts), opt_vec(rr)});
  write_csv(dir / "fig4_inset.csv", {"delta_omega_tilde", "t_r", "t_H", "eps_r"},
            {opt_vec(dw), opt_vec(tr), opt_vec(th), opt_vec(er)});
}

void export_figures(const RunManifest& run, const fs::path& dir) {
  fs::create_directories(dir);
  auto copy_if = [&](const char* name, const char* target) {
    fs::path src = run.aggregate(name);
    if (fs::exists(src)) write_table(dir / target, read_csv(src));
  };
  copy_if("couplings_hist", "fig2a.csv");
  copy_if("otoc", "fig3.csv");
  copy_if("spacing_hist", "fig4_spacing.csv");
  if (run.config.fit_couplings && run.rho_count > 0)
    write_csv(dir / "fig2a_inset.csv", {"delta_omega_tilde", "rho_mean", "rho_std", "count"},
              {VectorXd::Constant(1, run.config.delta_omega_tilde),
               VectorXd::Constant(1, run.rho_mean), VectorXd::Constant(1, run.rho_std),
               VectorXd::Constant(1, run.rho_count)});
  fs::path sff = run.aggregate("sff");
  if (fs::exists(sff)) {
    Table t = read_csv(sff);
    VectorXd time = t.col("t"), S = t.col("S");
    VectorXd ramp = VectorXd::Constant(time.size(), std::nan(""));
    VectorXd plateau = ramp;
    if (run.extraction.ramp) {
      const auto& r = *run.extraction.ramp;
      ramp = (r.ramp_intercept + r.ramp_slope * time.array()).matrix();
      plateau = (r.plateau_intercept + r.plateau_slope * time.array()).matrix();
    }
    write_csv(dir / "fig4.csv", {"t", "S", "ramp_fit", "plateau_fit"}, {time, S, ramp, plateau});
  }
}

}  // namespace cavsyk
