// Command-line front end: steady states, entanglement and EPR spectra,
// positive-P trajectory ensembles, and the acceptance suite.

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "triopo/triopo.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::optional<double> ratio;
  std::optional<double> pump;
  std::optional<double> omega_min, omega_max, omega_step;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  std::optional<std::string> out_path;
  std::optional<std::string> dump_path;
  std::optional<std::size_t> n_traj;
  std::optional<double> dt, t_end, burn_in;
  std::optional<std::string> scheme;
  std::optional<bool> noise;
};

void add_common_options(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("--config", o.config_path, "JSON configuration file");
  cmd->add_option("--ratio", o.ratio, "pump amplitude as a fraction of threshold");
  cmd->add_option("--pump", o.pump, "absolute pump amplitude");
  cmd->add_option("--omega-min", o.omega_min, "grid start (units of kappa)");
  cmd->add_option("--omega-max", o.omega_max, "grid end (units of kappa)");
  cmd->add_option("--omega-step", o.omega_step, "grid step (units of kappa)");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--format", o.format, "output format: csv|json");
  cmd->add_option("--out", o.out_path, "output path (default: stdout)");
}

void add_sde_options(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("--n-traj", o.n_traj, "number of trajectories");
  cmd->add_option("--dt", o.dt, "integration step");
  cmd->add_option("--t-end", o.t_end, "integration horizon");
  cmd->add_option("--burn-in", o.burn_in, "stationary sampling start");
  cmd->add_option("--scheme", o.scheme, "integration scheme: midpoint|euler");
  cmd->add_flag("--noise,!--no-noise", o.noise, "toggle stochastic terms");
  cmd->add_option("--dump", o.dump_path, "raw-trajectory CSV dump path");
}

triopo::RunConfig resolve_config(const CliOverrides& o) {
  triopo::RunConfig cfg = o.config_path.empty() ? triopo::RunConfig{}
                                                : triopo::config_from_file(o.config_path);
  if (o.ratio) {
    cfg.pump_ratio = o.ratio;
    cfg.pump_abs.reset();
  }
  if (o.pump) {
    cfg.pump_abs = o.pump;
    if (!o.ratio) cfg.pump_ratio.reset();
  }
  if (o.ratio && o.pump)
    throw triopo::Error(triopo::ErrorCode::BadConfig,
                        "--ratio and --pump are mutually exclusive");
  if (o.omega_min) cfg.omega.min = *o.omega_min;
  if (o.omega_max) cfg.omega.max = *o.omega_max;
  if (o.omega_step) cfg.omega.step = *o.omega_step;
  if (o.seed) cfg.sde.seed = *o.seed;
  if (o.format) cfg.format = triopo::parse_format(*o.format);
  if (o.out_path) cfg.out_path = *o.out_path;
  if (o.dump_path) cfg.dump_path = *o.dump_path;
  if (o.n_traj) cfg.sde.n_traj = *o.n_traj;
  if (o.dt) cfg.sde.dt = *o.dt;
  if (o.t_end) cfg.sde.t_end = *o.t_end;
  if (o.burn_in) cfg.sde.burn_in = *o.burn_in;
  if (o.scheme) cfg.sde.scheme = triopo::parse_scheme(*o.scheme);
  if (o.noise) cfg.sde.noise = *o.noise;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triply concurrent OPO: steady states, entanglement spectra, EPR criteria "
               "and positive-P trajectory ensembles"};
  app.require_subcommand(1);

  CliOverrides o;
  auto* steady = app.add_subcommand("steady", "threshold, branch and steady-state amplitudes");
  add_common_options(steady, o);
  auto* spectra = app.add_subcommand("spectra", "entanglement combination spectrum scan");
  add_common_options(spectra, o);
  auto* epr = app.add_subcommand("epr", "EPR inference products over the grid");
  add_common_options(epr, o);
  auto* sde = app.add_subcommand("sde", "trajectory ensemble vs the linearized oracle");
  add_common_options(sde, o);
  add_sde_options(sde, o);

  auto* validate = app.add_subcommand("validate", "run the acceptance suite");
  bool skip_sde = false;
  triopo::AcceptanceOptions acc;
  validate->add_flag("--skip-sde", skip_sde, "skip the slow trajectory-ensemble criterion");
  validate->add_option("--seed", acc.sde_seed, "ensemble seed");
  validate->add_option("--n-traj", acc.sde_trajectories, "ensemble size");
  validate->add_option("--io-scale", acc.io_scale,
                       "test hook: rescale the output-spectrum emission term");
  validate->add_flag("--flip-drift-sign", acc.flip_drift_entry,
                     "test hook: flip one drift coupling before the Jacobian check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? triopo::exit_code::kOk : triopo::exit_code::kBadConfig;
  }

  try {
    if (validate->parsed()) {
      acc.include_sde = !skip_sde;
      return triopo::cmd_validate(acc, std::cout);
    }
    const triopo::RunConfig cfg = resolve_config(o);
    if (steady->parsed()) triopo::cmd_steady(cfg, std::cout);
    if (spectra->parsed()) triopo::cmd_spectra(cfg, std::cout);
    if (epr->parsed()) triopo::cmd_epr(cfg, std::cout);
    if (sde->parsed()) triopo::cmd_sde(cfg, std::cout);
    return triopo::exit_code::kOk;
  } catch (const triopo::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return e.code() == triopo::ErrorCode::BadConfig ? triopo::exit_code::kBadConfig
                                                    : triopo::exit_code::kNumericFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return triopo::exit_code::kNumericFailure;
  }
}
