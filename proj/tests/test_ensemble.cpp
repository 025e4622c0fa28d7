#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "cavsyk/compare.hpp"
#include "cavsyk/csv.hpp"
#include "cavsyk/ensemble.hpp"
#include "cavsyk/errors.hpp"

using namespace cavsyk;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / "cavsyk_unit" / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig small_effective(const std::string& name) {
  RunConfig c;
  c.name = name;
  c.N = 6;
  c.L = 10;
  c.Nx = 160;
  c.M = 20;
  c.delta_omega_tilde = 0.1;
  c.realizations = 4;
  c.master_seed = 77;
  c.spacing.enabled = false;
  c.otoc.per_decade = 20;
  c.sff.per_decade = 20;
  c.workers = 1;
  c.output_dir = scratch(name).string();
  return c;
}

RunConfig small_syk(const std::string& name) {
  RunConfig c = small_effective(name);
  c.model = Provenance::syk_gauss_real;
  c.N = 8;
  return c;
}

}  // namespace

TEST_CASE("seed splitting") {
  CHECK(mix64(0) == 0);
  CHECK(split_seed(0, 0) == 0xE220A8397B1DCDAFULL);
  CHECK(split_seed(0, 1) == 0x6E789E6AA1B965F4ULL);
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000000; ++i) seen.insert(split_seed(12345, i));
  CHECK(seen.size() == 1000000);
  CHECK(split_seed(1, 0) != split_seed(2, 0));
}

TEST_CASE("single realization aggregate equals the realization") {
  RunConfig c = small_syk("single");
  c.realizations = 1;
  auto m = run_ensemble(c);
  REQUIRE(m.succeeded() == 1);
  CHECK_FALSE(m.partial);
  CHECK(m.realizations[0].seed == split_seed(77, 0));
  fs::path r0 = m.dir / "realizations" / "r0000";
  CHECK(slurp(m.aggregate("otoc")) == slurp(r0 / "otoc.csv"));
  CHECK(slurp(m.aggregate("sff")) == slurp(r0 / "sff.csv"));
  Table ev = read_csv(r0 / "eigenvalues.csv");
  CHECK(ev.rows.size() == 70);
  Table cp = read_csv(r0 / "couplings.csv");
  CHECK(cp.rows.size() == 28 * 28);
  Table otoc = read_csv(m.aggregate("otoc"));
  CHECK(otoc.rows[0][0] == 0.0);
  CHECK(otoc.rows[0][1] == 1.0);
}

TEST_CASE("aggregates do not depend on worker count or schedule") {
  RunConfig a = small_effective("det_a");
  auto ma = run_ensemble(a);
  REQUIRE(ma.succeeded() == 4);
  RunConfig b = a;
  b.output_dir = scratch("det_b").string();
  b.workers = 3;
  RunOptions opt;
  opt.schedule_seed = 999;
  int calls = 0;
  opt.progress = [&](const RealizationRecord&) { ++calls; };
  auto mb = run_ensemble(b, opt);
  CHECK(calls == 4);
  for (const char* name : {"otoc", "sff", "rho", "couplings_hist"}) {
    INFO(name);
    REQUIRE(fs::exists(ma.aggregate(name)));
    CHECK(slurp(ma.aggregate(name)) == slurp(mb.aggregate(name)));
  }
  CHECK(ma.extraction.t_star == mb.extraction.t_star);
  CHECK(ma.rho_mean == mb.rho_mean);
  CHECK(ma.rho_count == 4);
}

TEST_CASE("a manifest reproduces its run") {
  RunConfig c = small_syk("repro");
  c.realizations = 3;
  auto m = run_ensemble(c);
  auto loaded = load_manifest(m.dir);
  CHECK(loaded.config.master_seed == 77);
  CHECK(loaded.realizations.size() == 3);
  CHECK(loaded.extraction.t_star == m.extraction.t_star);
  CHECK(loaded.version == kVersion);
  RunConfig again = load_config((m.dir / "manifest.json").string());
  again.output_dir = scratch("repro_again").string();
  auto m2 = run_ensemble(again);
  CHECK(slurp(m.aggregate("otoc")) == slurp(m2.aggregate("otoc")));
  CHECK(slurp(m.aggregate("sff")) == slurp(m2.aggregate("sff")));
}

TEST_CASE("failed realizations are recorded and the run is partial") {
  RunConfig c = small_syk("partial");
  c.N = 6;  // 20 levels is too few for level statistics
  c.spacing.enabled = true;
  c.realizations = 2;
  auto m = run_ensemble(c);
  CHECK(m.partial);
  CHECK(m.succeeded() == 0);
  CHECK(m.realizations[0].error.find("50 levels") != std::string::npos);
  auto j = manifest_to_json(m);
  CHECK(j["status"] == "partial");
  CHECK_FALSE(fs::exists(m.aggregate("otoc")));
}

TEST_CASE("config parsing") {
  using nlohmann::json;
  auto c = config_from_json(json{{"name", "x"}, {"N", 8}, {"otoc", {{"i", 2}, {"j", 5}}}});
  CHECK(c.N == 8);
  CHECK(c.filling() == 4);
  CHECK(c.otoc.j == 5);
  auto round = config_from_json(config_to_json(c));
  CHECK(config_to_json(round) == config_to_json(c));
  CHECK_THROWS_AS(config_from_json(json{{"nonsense", 1}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"otoc", {{"tmin", 1}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"N", 30}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"N", "ten"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"model", "gpt"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"otoc", {{"i", 1}, {"j", 1}}}}), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  RunConfig pw;
  pw.drive = "plane_wave";
  CHECK(pw.complex_couplings());
}

TEST_CASE("shipped configs parse") {
  int count = 0;
  for (const auto& e : fs::directory_iterator(CAVSYK_CONFIG_DIR)) {
    INFO(e.path().string());
    CHECK_NOTHROW(load_config(e.path().string()));
    ++count;
  }
  CHECK(count >= 5);
}

TEST_CASE("time grids follow the config") {
  RunConfig c;
  c.N = 10;
  auto o = otoc_times(c);
  CHECK(o.t[0] == 0.0);
  CHECK(o.t[1] == c.otoc.t_min);
  c.otoc.include_zero = false;
  CHECK(otoc_times(c).t[0] == c.otoc.t_min);
  auto s = sff_times(c);
  CHECK(s.t[s.t.size() - 1] >= 10 * 2 * 252 * (1 - 1e-12));
}

TEST_CASE("comparison against a reference") {
  RunManifest ref;
  ref.config.name = "syk";
  ref.config.model = Provenance::syk_gauss_real;
  ref.extraction.t_star = 2.0;
  RampResult rr;
  rr.t_r = 10;
  rr.t_H = 100;
  ref.extraction.ramp = rr;

  auto self = compare_runs({ref}, ref);
  CHECK(*self.rows[0].eps_r == 0.0);
  CHECK(*self.rows[0].rate_ratio == 1.0);

  std::vector<RunManifest> runs;
  for (double dw : {10.0, 1.0, 0.1}) {
    RunManifest r = ref;
    r.config.name = "eff";
    r.config.model = Provenance::effective;
    r.config.delta_omega_tilde = dw;
    r.extraction.t_star = 4.0;
    RampResult x = rr;
    // Own Heisenberg time 80: t_r rescales by 100/80.
    x.t_H = 80;
    x.t_r = 10 * (1 + 0.25 * std::pow(1 / dw, -0.5)) * 0.8;
    r.extraction.ramp = x;
    runs.push_back(r);
  }
  auto rep = compare_runs(runs, ref);
  CHECK(*rep.rows[0].rate_ratio == doctest::Approx(0.5));
  CHECK(*rep.rows[0].t_r == doctest::Approx(10 * (1 + 0.25 * std::sqrt(10.0))));
  CHECK(*rep.rows[2].eps_r == doctest::Approx(0.25 * std::sqrt(0.1)));
  REQUIRE(rep.alpha);
  CHECK(rep.alpha->alpha == doctest::Approx(0.5));

  RunManifest other = ref;
  other.config.N = 12;
  CHECK_THROWS_AS(compare_runs({other}, ref), InvalidArgument);
  RunManifest grid = ref;
  grid.config.sff.per_decade = 7;
  CHECK_THROWS_AS(compare_runs({grid}, ref), InvalidArgument);

  fs::path dir = scratch("compare");
  rep.write(dir);
  Table t = read_csv(dir / "fig4_inset.csv");
  CHECK(t.rows.size() == 3);
  CHECK(t.col("eps_r")[1] == doctest::Approx(0.25));
}

TEST_CASE("figure export") {
  RunConfig c = small_syk("export");
  c.realizations = 2;
  auto m = run_ensemble(c);
  fs::path dir = scratch("export_out");
  export_figures(load_manifest(m.dir), dir);
  CHECK(fs::exists(dir / "fig3.csv"));
  CHECK(fs::exists(dir / "fig4.csv"));
  CHECK(fs::exists(dir / "fig2a.csv"));
  CHECK(fs::exists(dir / "fig2a_inset.csv"));
  Table f4 = read_csv(dir / "fig4.csv");
  CHECK(f4.header == std::vector<std::string>{"t", "S", "ramp_fit", "plateau_fit"});
  CHECK(slurp(dir / "fig3.csv") == slurp(m.aggregate("otoc")));
}
