// Command line front end: simulate, boundary-table, weak-error, exactsim-check.

#include <cmath>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "lte/harness.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> model;
  std::optional<double> gamma;
  std::vector<std::string> schemes;
  std::vector<double> lambdas;
  std::optional<double> T;
  std::optional<double> dx;
  std::optional<double> dt;
  std::vector<int> levels;
  std::optional<int> ref_level;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::optional<double> nu;
  std::vector<std::string> test_functions;
  std::optional<double> x0;
  std::optional<double> oracle_step;
  std::optional<std::uint64_t> sample_id;
  bool no_timing = false;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config_path, "JSON file with ExperimentConfig fields")
      ->check(CLI::ExistingFile);
  sub->add_option("--model", o.model, "allen-cahn | nagumo | sis");
  sub->add_option("--gamma", o.gamma, "Nagumo threshold in (0, 1/2)");
  sub->add_option("--scheme", o.schemes, "lte | em | sem | exp (comma separated list)")
      ->delimiter(',');
  sub->add_option("--lambda", o.lambdas, "noise scaling (comma separated list)")->delimiter(',');
  sub->add_option("--T", o.T, "final time");
  sub->add_option("--dx", o.dx, "space step (1/dx integer)");
  sub->add_option("--dt", o.dt, "time step");
  sub->add_option("--levels", o.levels, "weak-error levels l: dx = 2^-l, dt = 4^-l T")->delimiter(',');
  sub->add_option("--ref-level", o.ref_level, "reference level of the weak-error run");
  sub->add_option("--samples", o.samples, "Monte Carlo samples");
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--out", o.out, "output CSV path (stdout if omitted)");
  sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  sub->add_option("--nu", o.nu, "proposal tail parameter in (0,1)");
}

lte::ExperimentConfig resolve(const Overrides& o, bool check_mode) {
  lte::ExperimentConfig cfg;
  if (!o.config_path.empty()) cfg = lte::load_config_file(o.config_path);
  if (o.model) cfg.model = *o.model;
  if (o.gamma) cfg.gamma = *o.gamma;
  if (!o.schemes.empty()) cfg.schemes = o.schemes;
  if (!o.lambdas.empty()) cfg.lambdas = o.lambdas;
  if (o.T) cfg.T = *o.T;
  if (o.dx) cfg.dx = *o.dx;
  if (o.dt) (check_mode ? cfg.check_dt : cfg.dt) = *o.dt;
  if (!o.levels.empty()) cfg.levels = o.levels;
  if (o.ref_level) cfg.reference_level = *o.ref_level;
  if (o.samples) (check_mode ? cfg.check_samples : cfg.samples) = *o.samples;
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.output_path = *o.out;
  if (o.threads) cfg.threads = *o.threads;
  if (o.nu) cfg.nu = *o.nu;
  if (!o.test_functions.empty()) cfg.test_functions = o.test_functions;
  if (o.x0) cfg.x0 = *o.x0;
  if (o.oracle_step) cfg.oracle_step = *o.oracle_step;
  if (o.sample_id) cfg.sample_id = *o.sample_id;
  if (o.no_timing) cfg.record_timing = false;
  return cfg;
}

int run_simulate(const lte::ExperimentConfig& cfg) {
  const lte::ModelSpec model = cfg.model_spec();
  const lte::Scheme scheme = lte::parse_scheme(cfg.schemes.at(0));
  const lte::Trajectory tr = lte::simulate_path(scheme, model, cfg.path_grid(), cfg.lambdas.at(0),
                                                cfg.seed, cfg.sample_id, cfg.exact_options());
  lte::emit_csv(tr, model, cfg.output_path);
  return 0;
}

int run_boundary(const lte::ExperimentConfig& cfg) {
  lte::emit_csv(lte::boundary_table(cfg), cfg.output_path);
  return 0;
}

int run_weak(const lte::ExperimentConfig& cfg) {
  const auto reports = lte::weak_error_experiment(cfg);
  lte::emit_csv(reports, cfg.output_path);
  for (const auto& r : reports) {
    if (r.has_fit) {
      std::cerr << fmt::format("{} {}: slope {:.4f} (residual {:.4f})\n", r.model, r.test_function,
                               r.fit.slope, r.fit.residual);
    }
  }
  return 0;
}

int run_check(const lte::ExperimentConfig& cfg) {
  const lte::ModelSpec model = cfg.model_spec();
  const lte::ExactSimCheck c =
      lte::exactsim_check(model, cfg.x0, cfg.check_dt, cfg.lambdas.at(0), cfg.check_samples,
                          cfg.oracle_step, cfg.seed, cfg.resolved_threads(), cfg.exact_options());
  lte::emit_csv(c, cfg.output_path);
  const bool ok = c.mean.within(3.0) && c.variance.within(3.0) && c.ks_distance < 0.01;
  std::cerr << fmt::format(
      "{}: mean {:.6f} vs {:.6f} (se {:.2e}), variance {:.6f} vs {:.6f} (se {:.2e}), KS {:.4f}: {}\n",
      c.model, c.mean.exact, c.mean.oracle, c.mean.std_error, c.variance.exact, c.variance.oracle,
      c.variance.std_error, c.ks_distance, ok ? "pass" : "FAIL");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary-preserving LTE scheme for semilinear SPDEs"};
  app.require_subcommand(1);

  Overrides sim_o;
  Overrides bnd_o;
  Overrides weak_o;
  Overrides chk_o;

  auto* sim = app.add_subcommand("simulate", "one trajectory as t,x,value CSV");
  add_common(sim, sim_o);
  sim->add_option("--sample-id", sim_o.sample_id, "sample index to draw");

  auto* bnd = app.add_subcommand("boundary-table", "count paths that stay in the domain");
  add_common(bnd, bnd_o);

  auto* weak = app.add_subcommand("weak-error", "weak error of LTE against a fine reference");
  add_common(weak, weak_o);
  weak->add_option("--test-function", weak_o.test_functions, "F1 | F2 (comma separated list)")
      ->delimiter(',');
  weak->add_flag("--no-timing", weak_o.no_timing, "write wall_seconds as 0");

  auto* chk = app.add_subcommand("exactsim-check", "exact step against a fine Euler-Maruyama oracle");
  add_common(chk, chk_o);
  chk->add_option("--x0", chk_o.x0, "start value in working coordinates");
  chk->add_option("--oracle-step", chk_o.oracle_step, "Euler-Maruyama oracle step");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return run_simulate(resolve(sim_o, false));
    if (bnd->parsed()) return run_boundary(resolve(bnd_o, false));
    if (weak->parsed()) return run_weak(resolve(weak_o, false));
    if (chk->parsed()) return run_check(resolve(chk_o, true));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
