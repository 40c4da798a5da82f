#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "triopo/criteria.hpp"
#include "triopo/linearization.hpp"
#include "triopo/sde.hpp"

namespace triopo {

struct AcceptanceOptions {
  bool include_sde = true;  // the trajectory-ensemble criterion costs minutes
  std::uint64_t sde_seed = 20;
  std::size_t sde_trajectories = 10000;
  unsigned n_threads = 0;
  // test hooks for sensitivity checks of the suite itself
  double io_scale = 1.0;          // rescales the emission term of output spectra
  bool flip_drift_entry = false;  // flips one drift coupling before comparisons
  std::ostream* progress = nullptr;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  bool skipped = false;
  std::string detail;
  double seconds = 0.0;
};

namespace acceptance_detail {

inline SystemParams bench_params(double pump) {
  SystemParams p;
  p.chi = {0.01, 0.01, 0.01};
  p.gamma = 10.0;
  p.kappa = 1.0;
  p.pump = {pump, pump, pump};
  return p;
}

constexpr double kThreshold = 500.0;

/// Numeric combination spectrum with the optional normalization hook applied:
/// the shot-noise floor is kept and the emission term is rescaled.
inline double hooked_vlf(const AcceptanceOptions& opt, const LinearizedSystem& lin, int i, int j,
                         const SpectralMatrix& sm) {
  const double v = vlf_spectrum(lin, i, j, sm);
  return 5.0 + opt.io_scale * (v - 5.0);
}

inline Mat12 hooked_drift(const AcceptanceOptions& opt, const SystemParams& p,
                          const SteadyState& ss) {
  Mat12 a = build_drift(p, ss);
  if (opt.flip_drift_entry) a(slot(4, 0), slot(5, 1)) *= -1.0;
  return a;
}

class Checker {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && first_failure_.empty()) first_failure_ = what;
    all_ok_ = all_ok_ && ok;
  }
  bool ok() const { return all_ok_; }
  const std::string& failure() const { return first_failure_; }

 private:
  bool all_ok_ = true;
  std::string first_failure_;
};

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// --- criterion 1: threshold and steady states -------------------------------

inline CriterionResult criterion_steady_states(const AcceptanceOptions&) {
  Checker c;
  const double e_th = threshold_pump(bench_params(0.0));
  c.require(std::abs(e_th - kThreshold) <= 1e-12 * kThreshold, "threshold must be 500");

  const auto below = steady_state(bench_params(450.0));
  for (int m = 1; m <= 3; ++m)
    c.require(std::abs(below.amp(m) - cd(45.0)) <= 1e-12 * 45.0, "pump amplitude 45 at E=450");
  for (int m = 4; m <= 6; ++m)
    c.require(std::abs(below.amp(m)) <= 1e-12, "empty signals at E=450");

  const auto above = steady_state(bench_params(550.0));
  const double beta = std::sqrt(5000.0);
  for (int m = 1; m <= 3; ++m)
    c.require(std::abs(above.amp(m) - cd(50.0)) <= 1e-12 * 50.0, "pump amplitude 50 at E=550");
  for (int m = 4; m <= 6; ++m)
    c.require(std::abs(above.amp(m) - cd(beta)) <= 1e-12 * beta, "signal amplitude at E=550");
  c.require(std::abs(intensity_ratio(above) - 2.0) <= 1e-12 * 2.0, "intensity ratio 2");

  return {1, "threshold and steady states", c.ok(), false,
          c.ok() ? "E_th=500, both branches exact" : c.failure(), 0.0};
}

// --- criterion 2: analytic-numeric oracle ------------------------------------

inline CriterionResult criterion_oracle(const AcceptanceOptions& opt) {
  Checker c;
  double worst = 0.0;
  for (double ratio : {0.5, 0.9, 0.99, 1.01, 1.1, 1.5}) {
    const auto p = bench_params(kThreshold * ratio);
    const auto lin = build_linearized(p, steady_state(p));
    for (int k = 0; k <= 600; ++k) {
      const double w = 0.01 * k;
      const auto sm = spectral_matrix(lin, w);
      const double numeric = hooked_vlf(opt, lin, 4, 5, sm);
      const double analytic = analytic_vlf(p, p.pump[0], w);
      const double rel = std::abs(numeric - analytic) / std::abs(analytic);
      worst = std::max(worst, rel);
      c.require(rel < 1e-8, "numeric/analytic mismatch at ratio " + fmt(ratio) + ", omega " +
                                fmt(w) + " (rel " + fmt(rel) + ")");
    }
  }
  return {2, "analytic-numeric spectrum oracle", c.ok(), false,
          c.ok() ? "max relative residual " + fmt(worst) : c.failure(), 0.0};
}

// --- criterion 3: reference anchor values ----------------------------------------

inline CriterionResult criterion_anchors(const AcceptanceOptions& opt) {
  Checker c;
  auto vlf_at = [&](double pump, double w) {
    const auto p = bench_params(pump);
    const auto lin = build_linearized(p, steady_state(p));
    return hooked_vlf(opt, lin, 4, 5, spectral_matrix(lin, w));
  };

  const double limit = 2.0 / 9.0;
  const double near = vlf_at(kThreshold * 0.9999, 0.0);
  c.require(std::abs(near - limit) <= 1e-3,
            "zero-frequency value near threshold: " + fmt(near) + " vs 2/9");

  double prev = vlf_at(kThreshold * 0.9, 0.0);
  for (double ratio : {0.99, 0.999, 0.9999}) {
    const double cur = vlf_at(kThreshold * ratio, 0.0);
    c.require(cur < prev && cur > limit,
              "approach to 2/9 must be monotone from above (ratio " + fmt(ratio) + ")");
    prev = cur;
  }

  for (double ratio : {0.9, 1.1}) {
    const double far = vlf_at(kThreshold * ratio, 100.0);
    c.require(far >= 4.99 && far <= 5.0,
              "uncorrelated limit at omega=100, ratio " + fmt(ratio) + ": " + fmt(far));
  }
  return {3, "zero-frequency and far-field anchors", c.ok(), false,
          c.ok() ? "I(0)->2/9, I(100k) in [4.99,5]" : c.failure(), 0.0};
}

// --- criterion 4: entanglement violation values -------------------------------

inline CriterionResult criterion_violation(const AcceptanceOptions& opt) {
  Checker c;
  const double expect_below = 5.0 - 35.703 / 7.590025;
  const double expect_above = 5.0 - 1927600.0 / 465124.0;
  for (auto [ratio, expect] : {std::pair{0.9, expect_below}, std::pair{1.1, expect_above}}) {
    const auto p = bench_params(kThreshold * ratio);
    const auto lin = build_linearized(p, steady_state(p));
    const auto sm = spectral_matrix(lin, 0.0);
    for (auto [i, j] : {std::pair{4, 5}, std::pair{4, 6}, std::pair{5, 6}}) {
      const double v = hooked_vlf(opt, lin, i, j, sm);
      c.require(v < kVlfBound, "pair criterion must be violated at omega=0");
      c.require(std::abs(v - expect) <= 1e-3,
                "pair value " + fmt(v) + " vs expected " + fmt(expect));
    }
  }
  return {4, "tripartite violation at both drives", c.ok(), false,
          c.ok() ? "all pairs < 4 with values 0.2961 / 0.8557" : c.failure(), 0.0};
}

// --- criterion 5: EPR products -----------------------------------------------

inline CriterionResult criterion_epr(const AcceptanceOptions&) {
  Checker c;
  {
    const auto p = bench_params(kThreshold * 0.9);
    const auto lin = build_linearized(p, steady_state(p));
    for (int k = -600; k <= 600; ++k) {
      const auto sm = spectral_matrix(lin, 0.01 * k);
      const double joint = epr_joint_inference(lin, 4, +1, sm) / kEprJointBound;
      const double single = epr_single_inference(lin, 4, +1, sm) / kEprSingleBound;
      c.require(std::abs(joint - single) < 1e-6 * std::abs(single),
                "normalized inference products must coincide below threshold");
    }
  }
  {
    const auto p = bench_params(kThreshold * 1.1);
    const auto lin = build_linearized(p, steady_state(p));
    const auto sm0 = spectral_matrix(lin, 0.0);
    c.require(epr_joint_inference(lin, 4, +1, sm0) < kEprJointBound,
              "joint product must violate 4 above threshold");
    c.require(epr_single_inference(lin, 4, +1, sm0) < kEprSingleBound,
              "single product must violate 1 above threshold");
    for (int k = -600; k <= 600; ++k) {
      const auto sm = spectral_matrix(lin, 0.01 * k);
      const double joint = epr_joint_inference(lin, 4, +1, sm) / kEprJointBound;
      const double single = epr_single_inference(lin, 4, +1, sm) / kEprSingleBound;
      c.require(single <= joint + 1e-9,
                "two-mode inference must violate at least as strongly");
    }
  }
  return {5, "EPR inference products", c.ok(), false,
          c.ok() ? "coincide below; both violated above" : c.failure(), 0.0};
}

// --- criterion 6: stability spectrum ------------------------------------------

inline CriterionResult criterion_stability(const AcceptanceOptions&) {
  Checker c;
  for (double ratio : {0.9, 1.1}) {
    const auto p = bench_params(kThreshold * ratio);
    const auto lin = build_linearized(p, steady_state(p));
    c.require(lin.is_stable, "all eigenvalues must damp at ratio " + fmt(ratio));
  }
  // exactly at threshold the below-threshold state loses damping
  const auto p = bench_params(kThreshold);
  SteadyState ss;
  ss.branch = Branch::BelowThreshold;
  ss.pump_ratio = 1.0;
  for (int m = 1; m <= 3; ++m) {
    ss.alpha[slot(m, 0)] = kThreshold / p.gamma;
    ss.alpha[slot(m, 1)] = kThreshold / p.gamma;
  }
  const auto st = stability_eigenvalues(build_drift(p, ss));
  double least = -1e300;
  for (int i = 0; i < 12; ++i) least = std::max(least, st.eigenvalues(i).real());
  c.require(std::abs(least) <= 1e-9, "least-stable eigenvalue at threshold: " + fmt(least));
  return {6, "stability spectrum", c.ok(), false,
          c.ok() ? "damped off threshold, marginal at threshold" : c.failure(), 0.0};
}

// --- criterion 7: brute-force SDE consistency ----------------------------------

inline CriterionResult criterion_sde(const AcceptanceOptions& opt) {
  Checker c;
  const auto p = bench_params(kThreshold * 0.9);
  const auto ss = steady_state(p);
  const auto lin = build_linearized(p, steady_state(p));
  const Mat12 sigma = stationary_covariance(lin);

  TrajectoryConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 80.0;
  cfg.burn_in = 30.0;
  cfg.sample_every = 0.1;
  cfg.n_traj = opt.sde_trajectories;
  cfg.seed = opt.sde_seed;
  cfg.divergence_guard = default_divergence_guard(ss);
  cfg.n_threads = opt.n_threads;

  PhaseSpacePoint start;
  start.z = ss.alpha;
  const auto stats = integrate_ensemble(p, cfg, start);
  c.require(stats.n_diverged == 0, "no trajectory may diverge below threshold");

  // mean signal amplitudes vanish
  double worst_mean_z = 0.0;
  for (int m = 4; m <= 6; ++m)
    for (int d = 0; d < 2; ++d) {
      const auto mv = moments(stats, {slot(m, d)});
      worst_mean_z = std::max(worst_mean_z, z_score(mv.value, cd{}, mv.se));
    }
  c.require(worst_mean_z < 3.0, "signal means must vanish (max |z| " + fmt(worst_mean_z) + ")");

  // covariances against the Lyapunov oracle. The pump-pump block carries an
  // O(chi^2) nonlinear floor outside the linearized model, so it is held to
  // an absolute bound instead of a z-score.
  const auto cov = fluctuation_covariance(stats);
  double worst_cov_z = 0.0, worst_pump = 0.0;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) {
      const int ij = EnsembleStats::pair_index(i, j);
      if (i < 6 && j < 6) {
        worst_pump = std::max(worst_pump, std::abs(cov.cov[ij] - sigma(i, j)));
      } else {
        worst_cov_z = std::max(worst_cov_z, z_score(cov.cov[ij], sigma(i, j), cov.se[ij]));
      }
    }
  c.require(worst_cov_z < 3.0, "covariance z-scores (max " + fmt(worst_cov_z) + ")");
  c.require(worst_pump < 1e-4,
            "pump-sector covariances must stay at the nonlinear floor (max " + fmt(worst_pump) +
                ")");

  // Monte-Carlo increment covariance against the closed-form diffusion
  const Mat12 d_ref = diffusion_closed_form(p, ss);
  PhaseSpacePoint pt;
  pt.z = ss.alpha;
  CounterRng rng(opt.sde_seed + 1, 0);
  const double dt = cfg.dt;
  const int n_draw = 1000000;
  std::array<double, 36> sum{}, sumsq{};
  for (int k = 0; k < n_draw; ++k) {
    const auto dw = detail::draw_wiener(rng, dt);
    const auto n = noise_increment(p, pt, dw);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        const double prod = (n[6 + i] * n[6 + j]).real() / dt;
        sum[6 * i + j] += prod;
        sumsq[6 * i + j] += prod * prod;
      }
  }
  double worst_inc_z = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const double mean = sum[6 * i + j] / n_draw;
      const double var = sumsq[6 * i + j] / n_draw - mean * mean;
      const double se = std::max(std::sqrt(var / n_draw), 1e-12);
      worst_inc_z = std::max(worst_inc_z, std::abs(mean - d_ref(6 + i, 6 + j).real()) / se);
    }
  c.require(worst_inc_z < 3.0, "increment covariance vs closed-form diffusion (max |z| " +
                                   fmt(worst_inc_z) + ")");

  std::string detail = "max |z|: means " + fmt(worst_mean_z) + ", cov " + fmt(worst_cov_z) +
                       ", increments " + fmt(worst_inc_z);
  return {7, "stochastic ensemble vs linearized oracle", c.ok(), false,
          c.ok() ? detail : c.failure(), 0.0};
}

// --- criterion 8: structural invariants ----------------------------------------

inline CriterionResult criterion_structure(const AcceptanceOptions& opt) {
  Checker c;
  for (double ratio : {0.9, 1.1}) {
    const auto p = bench_params(kThreshold * ratio);
    const auto ss = steady_state(p);

    // drift equals the finite-difference Jacobian of the nonlinear flow
    const Mat12 a = hooked_drift(opt, p, ss);
    double scale = 1.0;
    for (const auto& v : ss.alpha) scale = std::max(scale, std::abs(v));
    const double h = 1e-6 * scale;
    const double ref = a.cwiseAbs().maxCoeff();
    for (int col = 0; col < 12; ++col) {
      PhaseSpacePoint plus, minus;
      plus.z = ss.alpha;
      minus.z = ss.alpha;
      plus.z[col] += h;
      minus.z[col] -= h;
      const auto fp = drift(p, plus);
      const auto fm = drift(p, minus);
      for (int row = 0; row < 12; ++row) {
        const cd fd = (fp[row] - fm[row]) / (2.0 * h);
        c.require(std::abs(a(row, col) - fd) <=
                      1e-6 * std::max(std::abs(a(row, col)), ref),
                  "drift vs Jacobian at ratio " + fmt(ratio));
      }
    }

    // noise factorization
    const Mat12 b = build_noise_matrix(p, ss);
    c.require(((b * b.transpose()) - diffusion_closed_form(p, ss)).cwiseAbs().maxCoeff() < 1e-12,
              "noise matrix factorization");

    // evenness and signal relabeling symmetry
    const auto lin = build_linearized(p, ss);
    for (double w : {0.3, 1.1, 2.9, 5.7}) {
      const auto sp = spectral_matrix(lin, w);
      const auto sn = spectral_matrix(lin, -w);
      c.require(std::abs(vlf_spectrum(lin, 4, 5, sp) - vlf_spectrum(lin, 4, 5, sn)) < 1e-10,
                "spectra must be even in omega");
      const double base = vlf_spectrum(lin, 4, 5, sp);
      for (auto [i, j] : {std::pair{5, 6}, std::pair{6, 4}, std::pair{5, 4}})
        c.require(std::abs(vlf_spectrum(lin, i, j, sp) - base) < 1e-10,
                  "signal relabeling symmetry");
    }
  }

  // frequency-integral closure onto the stationary covariance
  {
    const auto p = bench_params(kThreshold * 0.9);
    const auto lin = build_linearized(p, steady_state(p));
    const Mat12 sigma = stationary_covariance(lin);
    const double step = 0.01, lim = 200.0;
    const int n = static_cast<int>(std::llround(2.0 * lim / step));
    Mat12 acc = Mat12::Zero();
    for (int i = 0; i <= n; ++i) {
      const double w = -lim + i * step;
      acc += ((i == 0 || i == n) ? 0.5 : 1.0) * spectral_matrix(lin, w).S;
    }
    acc *= step / (2.0 * std::numbers::pi);
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) {
        if (std::abs(sigma(i, j)) <= 1e-6) continue;
        c.require(std::abs(acc(i, j) - sigma(i, j)) < 1e-3 * std::abs(sigma(i, j)),
                  "spectrum integral must recover the covariance");
      }
  }
  return {8, "structural invariants", c.ok(), false,
          c.ok() ? "Jacobian, factorization, symmetry, integral closure" : c.failure(), 0.0};
}

}  // namespace acceptance_detail

/// Runs every acceptance criterion and reports one result per criterion.
inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {}) {
  using Fn = CriterionResult (*)(const AcceptanceOptions&);
  static constexpr Fn kCriteria[] = {
      acceptance_detail::criterion_steady_states, acceptance_detail::criterion_oracle,
      acceptance_detail::criterion_anchors,       acceptance_detail::criterion_violation,
      acceptance_detail::criterion_epr,           acceptance_detail::criterion_stability,
      acceptance_detail::criterion_sde,           acceptance_detail::criterion_structure,
  };
  std::vector<CriterionResult> results;
  for (Fn fn : kCriteria) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    if (fn == acceptance_detail::criterion_sde && !opt.include_sde) {
      r = {7, "stochastic ensemble vs linearized oracle", false, true, "skipped on request", 0.0};
    } else {
      try {
        r = fn(opt);
      } catch (const std::exception& e) {
        r.id = static_cast<int>(results.size()) + 1;
        r.name = "criterion " + std::to_string(r.id);
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
      }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    results.push_back(r);
    if (opt.progress) {
      *opt.progress << (r.skipped ? "SKIP" : r.pass ? "PASS" : "FAIL") << "  criterion " << r.id
                    << ": " << r.name << " — " << r.detail << "  [" << acceptance_detail::fmt(r.seconds)
                    << " s]" << std::endl;
    }
  }
  return results;
}

/// Prints the pass/fail matrix; returns the number of failed criteria.
inline int print_acceptance(std::ostream& os, const std::vector<CriterionResult>& results) {
  int failures = 0;
  for (const auto& r : results) {
    os << (r.skipped ? "SKIP" : r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << ": "
       << r.name << " — " << r.detail << "  [" << acceptance_detail::fmt(r.seconds) << " s]\n";
    if (!r.skipped && !r.pass) ++failures;
  }
  os << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
     << "\n";
  return failures;
}

}  // namespace triopo
