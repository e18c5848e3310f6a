// Batch front-end: builds Cayley balls, runs growth/cutoff studies, the
// best-constant minimization and the PDE pipelines, and emits CSV/JSON
// tables plus plot-ready data files.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "checks.hpp"
#include "sobolev/ball.hpp"
#include "sobolev/cutoff.hpp"
#include "sobolev/errors.hpp"
#include "sobolev/heat.hpp"
#include "sobolev/hodge.hpp"
#include "sobolev/io.hpp"
#include "sobolev/pde.hpp"
#include "sobolev/variational.hpp"

namespace fs = std::filesystem;
using namespace sobolev;
using json = io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitResourceCap = 4;

std::int64_t vertex_cap_from_env() {
  if (const char* cap = std::getenv("SOBOLEV_VERTEX_CAP")) return std::atoll(cap);
  return cayley::kDefaultVertexCap;
}

cayley::GroupSpec make_spec(const std::string& group, int dim) {
  if (group == "lattice") return cayley::GroupSpec::lattice(dim);
  if (group == "heisenberg") return cayley::GroupSpec::heisenberg();
  throw UsageError("group must be 'lattice' or 'heisenberg'");
}

json minimize_summary(const variational::MinimizationResult& res) {
  json j;
  j["K_est"] = res.K_est;
  j["el_residual"] = res.el_residual;
  j["el_residual_normalized"] = res.el_residual_normalized;
  j["iterations"] = res.iterations;
  j["converged"] = res.converged;
  j["projected_grad_norm"] = res.projected_grad_norm;
  j["constraint_drift"] = res.constraint_drift;
  j["restart_index"] = res.restart_index;
  j["argmax_vertex"] = res.argmax_vertex;
  j["dropped_translation_mass"] = res.dropped_translation_mass;
  j["multiplier_check"] = res.multiplier_check;
  return j;
}

int cmd_growth(const std::string& group, int dim, int nmax, const fs::path& out_dir) {
  io::RunManifest manifest("growth", out_dir);
  try {
    auto spec = make_spec(group, dim);
    manifest.set_config({{"group", group}, {"dim", spec.coord_dim()}, {"nmax", nmax}});
    auto g = cayley::growth_sequence(spec, nmax, vertex_cap_from_env());

    const fs::path csv = out_dir / "growth.csv";
    std::ofstream f(csv);
    f << "n,beta\n";
    for (std::size_t n = 0; n < g.values.size(); ++n) f << n << "," << g.values[n] << "\n";
    f.close();
    manifest.add_output(csv);

    json summary;
    summary["values"] = g.values;
    summary["fitted_dimension"] = g.fitted_dimension;
    summary["fit_window"] = {g.fit_lo, g.fit_hi};
    const fs::path js = out_dir / "growth.json";
    io::write_json(summary, js);
    manifest.add_output(js);
    manifest.set_summary({{"fitted_dimension", g.fitted_dimension}});
    manifest.set_status("ok");
    manifest.write();
    return kExitOk;
  } catch (const ResourceCapError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    manifest.set_status(std::string("resource-cap: ") + e.what());
    manifest.write();
    return kExitResourceCap;
  }
}

int cmd_cutoff(const std::string& kind_name, int dim, double r, std::vector<double> R_list,
               const fs::path& out_dir) {
  io::RunManifest manifest("cutoff", out_dir);
  try {
    cutoff::CutoffKind kind;
    if (kind_name == "first")
      kind = cutoff::CutoffKind::FirstOrderLog;
    else if (kind_name == "second")
      kind = cutoff::CutoffKind::SecondOrderSmooth;
    else
      throw UsageError("cutoff kind must be 'first' or 'second'");
    manifest.set_config(
        {{"kind", kind_name}, {"dim", dim}, {"r", r}, {"R_list", R_list}});

    auto table = cutoff::decay_study(kind, dim, r, R_list);

    const fs::path csv = out_dir / "decay.csv";
    io::write_decay_csv(table, csv);
    manifest.add_output(csv);
    json summary;
    summary["fitted_slopes"] = table.fitted_slopes;
    summary["fit_points"] = table.fit_points;
    summary["expected_slope_grad_first_order"] = 1 - dim;
    summary["expected_slope_second_order"] = 1 - dim / 2.0;
    const fs::path js = out_dir / "decay.json";
    io::write_json(summary, js);
    manifest.add_output(js);
    for (const auto& [k, unused] : table.fitted_slopes) {
      (void)unused;
      const fs::path dat = out_dir / ("decay_" + k + ".dat");
      io::write_decay_plot(table, k, dat);
      manifest.add_output(dat);
    }
    manifest.set_summary(summary);
    manifest.set_status("ok");
    manifest.write();
    return kExitOk;
  } catch (const ResourceCapError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    manifest.set_status(std::string("resource-cap: ") + e.what());
    manifest.write();
    return kExitResourceCap;
  }
}

int cmd_minimize(const fs::path& config_path, const fs::path& out_dir, bool hessian_l1) {
  io::RunManifest manifest(hessian_l1 ? "minimize-l1" : "minimize", out_dir);
  auto cfg = io::parse_config_file(config_path);
  manifest.set_config(io::config_echo(cfg));
  manifest.set_seed(cfg.seed);
  try {
    auto res = hessian_l1 ? variational::minimize_hessian_l1(cfg)
                          : variational::minimize_best_constant(cfg);

    const fs::path ucsv = out_dir / "u_star.csv";
    io::write_grid_csv(res.u_star, ucsv);
    manifest.add_output(ucsv);

    std::vector<double> radii;
    for (int rr = 0; rr <= cfg.domain_radius; ++rr) radii.push_back(rr);
    auto prof = variational::tail_profile(res.u_star, cfg.p, cfg.q, radii);
    const fs::path tcsv = out_dir / "tail_profile.csv";
    io::write_tail_csv(prof, tcsv);
    manifest.add_output(tcsv);

    json result = minimize_summary(res);
    result["objective_history_head"] =
        std::vector<double>(res.objective_history.begin(),
                            res.objective_history.begin() +
                                std::min<std::size_t>(res.objective_history.size(), 20));
    const fs::path js = out_dir / "result.json";
    io::write_json(result, js);
    manifest.add_output(js);
    manifest.set_summary({{"K_est", res.K_est}, {"converged", res.converged}});
    manifest.set_status(res.converged ? "ok" : "non-convergence");
    manifest.write();
    return res.converged ? kExitOk : kExitNonConvergence;
  } catch (const NonConvergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    manifest.set_status(std::string("non-convergence: ") + e.what());
    manifest.write();
    return kExitNonConvergence;
  }
}

int cmd_biharmonic(const fs::path& config_path, const fs::path& out_dir) {
  io::RunManifest manifest("biharmonic", out_dir);
  auto cfg = io::parse_config_file(config_path);
  manifest.set_config(io::config_echo(cfg));
  manifest.set_seed(cfg.seed);
  try {
    auto gs = pde::ground_state_biharmonic(cfg);
    const fs::path ucsv = out_dir / "ground_state.csv";
    io::write_grid_csv(gs.u, ucsv);
    manifest.add_output(ucsv);
    json rep;
    rep["K_est"] = gs.K_est;
    rep["scale_c"] = gs.scale_c;
    rep["multiplier"] = gs.multiplier;
    rep["v_norm_q"] = gs.v_norm_q;
    rep["v_dominates"] = gs.v_dominates;
    rep["positivity_ok"] = gs.positivity_ok;
    rep["r_biharmonic"] = gs.report.r_biharmonic;
    rep["positivity_u_min"] = gs.report.positivity_u;
    rep["stage1"] = minimize_summary(gs.stage1);
    const fs::path js = out_dir / "residual_report.json";
    io::write_json(rep, js);
    manifest.add_output(js);
    manifest.set_summary({{"K_est", gs.K_est}, {"positivity_ok", gs.positivity_ok}});
    manifest.set_status(gs.positivity_ok ? "ok" : "positivity-violated");
    manifest.write();
    return gs.positivity_ok ? kExitOk : kExitNonConvergence;
  } catch (const NonConvergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    manifest.set_status(std::string("non-convergence: ") + e.what());
    manifest.write();
    return kExitNonConvergence;
  }
}

int cmd_lane_emden(const fs::path& config_path, const fs::path& out_dir) {
  io::RunManifest manifest("lane-emden", out_dir);
  auto cfg = io::parse_config_file(config_path);
  manifest.set_config(io::config_echo(cfg));
  manifest.set_seed(cfg.seed);
  try {
    auto gs = pde::ground_state_biharmonic(cfg);
    auto [u, v] = pde::lane_emden_pair(gs.u, cfg.p);
    auto rep = pde::verify_system(u, v, cfg.p, cfg.q);
    const fs::path ucsv = out_dir / "u.csv";
    const fs::path vcsv = out_dir / "v.csv";
    io::write_grid_csv(u, ucsv);
    io::write_grid_csv(v, vcsv);
    manifest.add_output(ucsv);
    manifest.add_output(vcsv);
    json j;
    j["r_system_1"] = rep.r_system_1;
    j["r_system_2"] = rep.r_system_2;
    j["r_biharmonic"] = rep.r_biharmonic;
    j["positivity_u"] = rep.positivity_u;
    j["positivity_v"] = rep.positivity_v;
    j["hyperbola_ok"] = rep.hyperbola_ok;
    j["K_est"] = gs.K_est;
    const fs::path js = out_dir / "system_report.json";
    io::write_json(j, js);
    manifest.add_output(js);
    const bool ok = rep.positivity_u > 0 && rep.positivity_v > 0;
    manifest.set_summary({{"K_est", gs.K_est}, {"positive", ok}});
    manifest.set_status(ok ? "ok" : "positivity-violated");
    manifest.write();
    return ok ? kExitOk : kExitNonConvergence;
  } catch (const NonConvergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    manifest.set_status(std::string("non-convergence: ") + e.what());
    manifest.write();
    return kExitNonConvergence;
  }
}

int cmd_hodge(int dim, int radius, std::uint64_t seed, const fs::path& out_dir) {
  io::RunManifest manifest("hodge", out_dir);
  manifest.set_config({{"dim", dim}, {"radius", radius}, {"seed", seed}});
  manifest.set_seed(seed);
  try {
    auto ball = cayley::build_ball(cayley::GroupSpec::lattice(dim), radius, vertex_cap_from_env());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd a(ball->edges().size());
    for (Eigen::Index k = 0; k < a.size(); ++k) a[k] = dist(rng);
    calculus::EdgeFunction alpha(ball, a);
    auto res = calculus::hodge_decompose(alpha);

    const fs::path acsv = out_dir / "alpha.csv";
    const fs::path fcsv = out_dir / "potential.csv";
    const fs::path hcsv = out_dir / "circulation.csv";
    io::write_edge_csv(alpha, acsv);
    io::write_grid_csv(res.potential, fcsv);
    io::write_edge_csv(res.circulation, hcsv);
    manifest.add_output(acsv);
    manifest.add_output(fcsv);
    manifest.add_output(hcsv);

    auto divh = calculus::divergence(res.circulation);
    double div_interior = 0.0;
    for (cayley::VertexIndex i = 0; i < ball->size(); ++i)
      if (ball->is_interior(i)) div_interior = std::max(div_interior, std::abs(divh.values[i]));
    json j;
    j["solve_residual"] = res.solve_residual;
    j["orthogonality"] = res.orthogonality;
    j["div_circulation_interior_max"] = div_interior;
    const fs::path js = out_dir / "hodge_report.json";
    io::write_json(j, js);
    manifest.add_output(js);
    manifest.set_summary(j);
    manifest.set_status("ok");
    manifest.write();
    return kExitOk;
  } catch (const NonConvergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    manifest.set_status(std::string("non-convergence: ") + e.what());
    manifest.write();
    return kExitNonConvergence;
  }
}

int cmd_halflap(int dim, int radius, int support, const fs::path& out_dir) {
  io::RunManifest manifest("halflap", out_dir);
  manifest.set_config({{"dim", dim}, {"radius", radius}, {"support", support}});
  try {
    auto ball = cayley::build_ball(cayley::GroupSpec::lattice(dim), radius, vertex_cap_from_env());
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd u0 = Eigen::VectorXd::Zero(ball->size());
    for (cayley::VertexIndex i = 0; i < ball->size(); ++i)
      if (ball->distance(i) <= support) u0[i] = dist(rng);
    calculus::GridFunction u(ball, u0);

    auto half = calculus::half_laplacian(u);
    calculus::DenseSpectral spectral(ball);
    auto exact = spectral.sqrt_op(u);
    const double rel_spectral =
        (half.u.values - exact.values).norm() / exact.values.norm();
    auto twice = calculus::half_laplacian(half.u);
    auto lap_u = calculus::laplacian(u);
    const double rel_square =
        (twice.u.values + lap_u.values).norm() / lap_u.values.norm();

    json j;
    j["rel_error_vs_spectral_sqrt"] = rel_spectral;
    j["rel_error_squared_vs_minus_laplacian"] = rel_square;
    j["tail_bound"] = half.tail_bound;
    const fs::path js = out_dir / "halflap_report.json";
    io::write_json(j, js);
    manifest.add_output(js);
    manifest.set_summary(j);
    manifest.set_status("ok");
    manifest.write();
    return kExitOk;
  } catch (const NonConvergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    manifest.set_status(std::string("non-convergence: ") + e.what());
    manifest.write();
    return kExitNonConvergence;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete second-order Sobolev calculus on Cayley graphs"};
  app.require_subcommand(1);

  std::string group = "lattice", kind = "first", init = "radial-bump";
  int dim = 3, nmax = 10, radius = 10, support = 2;
  double r = 10.0;
  std::vector<double> R_list;
  std::string config_path, out_dir = "out";
  std::uint64_t seed = 0;
  std::string filter;
  bool inject_bug = false;

  auto* growth = app.add_subcommand("growth", "growth function of a Cayley ball");
  growth->add_option("--group", group, "lattice|heisenberg");
  growth->add_option("--dim", dim, "lattice dimension")->check(CLI::PositiveNumber);
  growth->add_option("--nmax", nmax, "maximum radius")->required()->check(CLI::PositiveNumber);
  growth->add_option("--out-dir", out_dir, "output directory");

  auto* cut = app.add_subcommand("cutoff", "cutoff norm decay study");
  cut->add_option("--kind", kind, "first|second");
  cut->add_option("--dim", dim, "lattice dimension")->check(CLI::PositiveNumber);
  cut->add_option("--r", r, "inner scale (distance; squared distance for second order)");
  cut->add_option("--R-list", R_list, "increasing outer scales")->required()->expected(-1);
  cut->add_option("--out-dir", out_dir, "output directory");

  auto* mini = app.add_subcommand("minimize", "best-constant minimization");
  mini->add_option("--config", config_path, "run config file")->required();
  mini->add_option("--out-dir", out_dir, "output directory");

  auto* mini1 = app.add_subcommand("minimize-l1", "p=1 Hessian-norm variant");
  mini1->add_option("--config", config_path, "run config file")->required();
  mini1->add_option("--out-dir", out_dir, "output directory");

  auto* bih = app.add_subcommand("biharmonic", "positive p-biharmonic ground state");
  bih->add_option("--config", config_path, "run config file")->required();
  bih->add_option("--out-dir", out_dir, "output directory");

  auto* lane = app.add_subcommand("lane-emden", "Lane-Emden pair via reduction-by-inversion");
  lane->add_option("--config", config_path, "run config file")->required();
  lane->add_option("--out-dir", out_dir, "output directory");

  auto* hodge = app.add_subcommand("hodge", "Hodge decomposition of a random 1-form");
  hodge->add_option("--dim", dim, "lattice dimension")->check(CLI::PositiveNumber);
  hodge->add_option("--radius", radius, "ball radius")->check(CLI::PositiveNumber);
  hodge->add_option("--seed", seed, "rng seed");
  hodge->add_option("--out-dir", out_dir, "output directory");

  auto* hl = app.add_subcommand("halflap", "half-Laplacian quadrature vs spectral oracle");
  hl->add_option("--dim", dim, "lattice dimension")->check(CLI::PositiveNumber);
  hl->add_option("--radius", radius, "ball radius")->check(CLI::PositiveNumber);
  hl->add_option("--support", support, "support radius of the test function");
  hl->add_option("--out-dir", out_dir, "output directory");

  auto* checks = app.add_subcommand("checks", "invariant property suites");
  checks->add_option("--filter", filter, "substring filter on property names");
  checks->add_flag("--inject-laplacian-sign-bug", inject_bug,
                   "mutation canary: run against a sign-broken Laplacian");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (growth->parsed()) return cmd_growth(group, dim, nmax, out_dir);
    if (cut->parsed()) {
      for (std::size_t i = 0; i + 1 < R_list.size(); ++i)
        if (!(R_list[i] < R_list[i + 1])) throw UsageError("--R-list must be increasing");
      return cmd_cutoff(kind, dim, r, R_list, out_dir);
    }
    if (mini->parsed()) return cmd_minimize(config_path, out_dir, false);
    if (mini1->parsed()) return cmd_minimize(config_path, out_dir, true);
    if (bih->parsed()) return cmd_biharmonic(config_path, out_dir);
    if (lane->parsed()) return cmd_lane_emden(config_path, out_dir);
    if (hodge->parsed()) return cmd_hodge(dim, radius, seed, out_dir);
    if (hl->parsed()) return cmd_halflap(dim, radius, support, out_dir);
    if (checks->parsed()) {
      cli::CheckOptions opts;
      opts.filter = filter;
      opts.inject_sign_bug = inject_bug;
      return cli::run_checks(opts) == 0 ? kExitOk : kExitFailure;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const ResourceCapError& e) {
    std::fprintf(stderr, "resource cap: %s\n", e.what());
    return kExitResourceCap;
  } catch (const NonConvergenceError& e) {
    std::fprintf(stderr, "non-convergence: %s\n", e.what());
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}
