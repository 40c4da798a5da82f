#pragma once

#include <iostream>
#include <ostream>
#include <string>

#include "triopo/acceptance.hpp"
#include "triopo/criteria.hpp"
#include "triopo/io.hpp"
#include "triopo/run_config.hpp"

namespace triopo {

/// Process exit codes of the command layer.
namespace exit_code {
constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kNumericFailure = 2;
constexpr int kBadConfig = 3;
}  // namespace exit_code

/// Threshold, branch, amplitudes and intensity ratio of the configured drive.
inline void cmd_steady(const RunConfig& cfg, std::ostream& out) {
  const auto p = cfg.resolved_params();
  const double e_th = threshold_pump(p);
  const auto ss = steady_state(p, cfg.threshold_guard);

  Table table;
  table.columns = {"mode", "dag", "re", "im"};
  for (int m = 1; m <= 6; ++m)
    for (int d = 0; d < 2; ++d)
      table.rows.push_back({static_cast<double>(m), static_cast<double>(d),
                            ss.amp(m, d).real(), ss.amp(m, d).imag()});

  nlohmann::json config = resolved_json(cfg);
  config["report"] = {
      {"threshold", e_th},
      {"branch", ss.branch == Branch::AboveThreshold ? "above" : "below"},
      {"pump_ratio", ss.pump_ratio}};
  if (ss.branch == Branch::AboveThreshold)
    config["report"]["intensity_ratio"] = intensity_ratio(ss);

  with_output(cfg.out_path, out,
              [&](std::ostream& os) { write_table(os, cfg.format, config, table); });
}

/// Combination-spectrum scan: numeric value, closed form and their residual.
inline void cmd_spectra(const RunConfig& cfg, std::ostream& out) {
  const auto p = cfg.resolved_params();
  const auto ss = steady_state(p, cfg.threshold_guard);
  const auto lin = build_linearized(p, ss);
  if (!lin.is_stable) throw Error(ErrorCode::Unstable, "configured steady state is unstable");

  Table table;
  table.columns = {"omega", "i_out_numeric", "i_out_analytic", "residual"};
  for (double w : cfg.omega.points(p.kappa)) {
    const double numeric = vlf_spectrum(lin, 4, 5, spectral_matrix(lin, w));
    const double analytic = analytic_vlf(p, p.pump[0], w);
    table.rows.push_back({w, numeric, analytic, numeric - analytic});
  }
  with_output(cfg.out_path, out,
              [&](std::ostream& os) { write_table(os, cfg.format, resolved_json(cfg), table); });
}

/// EPR inference products with their bounds and violation flags.
inline void cmd_epr(const RunConfig& cfg, std::ostream& out) {
  const auto p = cfg.resolved_params();
  const auto ss = steady_state(p, cfg.threshold_guard);
  const auto lin = build_linearized(p, ss);
  if (!lin.is_stable) throw Error(ErrorCode::Unstable, "configured steady state is unstable");

  Table table;
  table.columns = {"omega",        "epr_joint",    "epr_single",     "bound_joint",
                   "bound_single", "joint_violated", "single_violated"};
  for (double w : cfg.omega.points(p.kappa)) {
    const auto sm = spectral_matrix(lin, w);
    const double joint = epr_joint_inference(lin, 4, cfg.epr_sign, sm);
    const double single = epr_single_inference(lin, 4, cfg.epr_sign, sm);
    table.rows.push_back({w, joint, single, kEprJointBound, kEprSingleBound,
                          joint < kEprJointBound ? 1.0 : 0.0,
                          single < kEprSingleBound ? 1.0 : 0.0});
  }
  with_output(cfg.out_path, out,
              [&](std::ostream& os) { write_table(os, cfg.format, resolved_json(cfg), table); });
}

/// Trajectory-ensemble run against the Lyapunov oracle, or the convergence
/// report when noise is disabled. Row layout:
///   kind 0 — ensemble mean of slot i (reference 0 for signal modes)
///   kind 1 — fluctuation covariance of slots (i, j) vs the Lyapunov entry
///   kind 2 — noise-free final state of slot i vs the steady-state amplitude
inline void cmd_sde(const RunConfig& cfg, std::ostream& out) {
  const auto p = cfg.resolved_params();
  const auto ss = steady_state(p, cfg.threshold_guard);
  TrajectoryConfig tc = cfg.sde;
  tc.divergence_guard = cfg.divergence_guard.value_or(default_divergence_guard(ss));
  PhaseSpacePoint start;
  start.z = ss.alpha;

  nlohmann::json config = resolved_json(cfg);
  Table table;
  table.columns = {"kind", "i", "j", "value_re", "value_im", "se_re", "se_im",
                   "ref_re", "ref_im", "z"};

  if (!tc.noise) {
    const auto traj = integrate_trajectory(p, tc, start);
    if (traj.diverged) throw Error(ErrorCode::AllDiverged, "trajectory hit the divergence guard");
    const auto& fin = traj.z.back();
    for (int i = 0; i < 12; ++i) {
      const double err = std::abs(fin[i] - ss.alpha[i]);
      table.rows.push_back({2.0, static_cast<double>(i), -1.0, fin[i].real(), fin[i].imag(),
                            0.0, 0.0, ss.alpha[i].real(), ss.alpha[i].imag(), err});
    }
  } else {
    const auto lin = build_linearized(p, ss);
    if (!lin.is_stable)
      throw Error(ErrorCode::Unstable, "ensemble comparison needs a stable steady state");
    const Mat12 sigma = stationary_covariance(lin);
    const auto stats = integrate_ensemble(p, tc, start);
    const auto cov = fluctuation_covariance(stats);

    config["report"] = {{"n_total", stats.n_total},
                        {"n_diverged", stats.n_diverged},
                        {"n_effective", stats.n_effective()}};

    double max_z_signal_mean = 0.0;
    for (int i = 0; i < 12; ++i) {
      const auto mv = moments(stats, {i});
      const cd ref = i >= 6 ? cd{} : ss.alpha[i];
      const double z = z_score(mv.value, ref, mv.se);
      if (i >= 6) max_z_signal_mean = std::max(max_z_signal_mean, z);
      table.rows.push_back({0.0, static_cast<double>(i), -1.0, mv.value.real(), mv.value.imag(),
                            mv.se.re, mv.se.im, ref.real(), ref.imag(), z});
    }
    // the pump-pump block sits on an O(chi^2) nonlinear floor outside the
    // linearized oracle, so its z-scores are reported but summarized by an
    // absolute magnitude instead
    double max_z_cov = 0.0, max_abs_pump_cov = 0.0;
    for (int i = 0; i < 12; ++i)
      for (int j = i; j < 12; ++j) {
        const int ij = EnsembleStats::pair_index(i, j);
        const double z = z_score(cov.cov[ij], sigma(i, j), cov.se[ij]);
        if (i < 6 && j < 6)
          max_abs_pump_cov = std::max(max_abs_pump_cov, std::abs(cov.cov[ij] - sigma(i, j)));
        else
          max_z_cov = std::max(max_z_cov, z);
        table.rows.push_back({1.0, static_cast<double>(i), static_cast<double>(j),
                              cov.cov[ij].real(), cov.cov[ij].imag(), cov.se[ij].re,
                              cov.se[ij].im, sigma(i, j).real(), sigma(i, j).imag(), z});
      }
    config["report"]["max_z_signal_mean"] = max_z_signal_mean;
    config["report"]["max_z_cov_oracle"] = max_z_cov;
    config["report"]["max_abs_pump_cov"] = max_abs_pump_cov;
  }

  if (!cfg.dump_path.empty()) {
    const auto traj = integrate_trajectory(p, tc, start, /*stream=*/0);
    Table dump;
    dump.columns = {"t"};
    for (int m = 1; m <= 6; ++m)
      for (int d = 0; d < 2; ++d) {
        const std::string base = "a" + std::to_string(m) + (d ? "p" : "");
        dump.columns.push_back("re_" + base);
        dump.columns.push_back("im_" + base);
      }
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
      std::vector<double> row{traj.t[k]};
      for (int i = 0; i < 12; ++i) {
        row.push_back(traj.z[k][i].real());
        row.push_back(traj.z[k][i].imag());
      }
      dump.rows.push_back(std::move(row));
    }
    std::ofstream df(cfg.dump_path);
    if (!df) throw Error(ErrorCode::BadConfig, "cannot open dump file '" + cfg.dump_path + "'");
    write_csv(df, config, dump);
  }

  with_output(cfg.out_path, out,
              [&](std::ostream& os) { write_table(os, cfg.format, config, table); });
}

/// Runs the acceptance suite and prints the pass/fail matrix.
inline int cmd_validate(const AcceptanceOptions& opt, std::ostream& out) {
  AcceptanceOptions o = opt;
  o.progress = &out;
  const auto results = run_acceptance(o);
  int failures = 0;
  for (const auto& r : results)
    if (!r.skipped && !r.pass) ++failures;
  out << (failures == 0 ? "all criteria passed"
                        : std::to_string(failures) + " criteria failed")
      << std::endl;
  return failures == 0 ? exit_code::kOk : exit_code::kValidationFailure;
}

}  // namespace triopo
