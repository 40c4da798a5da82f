#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <thread>
#include <vector>

#include "triopo/params.hpp"
#include "triopo/rng.hpp"
#include "triopo/stats.hpp"
#include "triopo/steady_state.hpp"

namespace triopo {

/// Point of the doubled phase space: the twelve entries are independent
/// complex variables, alpha_j and alpha_j+ are NOT conjugate-constrained.
struct PhaseSpacePoint {
  std::array<cd, 12> z{};
  double t = 0.0;
};

enum class Scheme { EulerMaruyama, SemiImplicitMidpoint };

struct TrajectoryConfig {
  double dt = 1e-3;
  double t_end = 50.0;
  double burn_in = 20.0;      // stationary sampling starts here
  double sample_every = 0.1;  // spacing of moment samples after burn-in
  std::size_t n_traj = 1;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::SemiImplicitMidpoint;
  double divergence_guard = 1e9;  // max |z_i| before a trajectory is excluded
  bool noise = true;
  int midpoint_iterations = 3;
  unsigned n_threads = 0;  // 0 = hardware concurrency
};

/// Deterministic part of the positive-P equations of motion.
inline std::array<cd, 12> drift(const SystemParams& p, const PhaseSpacePoint& pt) {
  const auto& z = pt.z;
  const double g = p.gamma, k = p.kappa;
  const double x1 = p.chi[0], x2 = p.chi[1], x3 = p.chi[2];
  const double e1 = p.pump[0], e2 = p.pump[1], e3 = p.pump[2];
  return {
      -g * z[0] + e1 - x1 * z[6] * z[8],
      -g * z[1] + e1 - x1 * z[7] * z[9],
      -g * z[2] + e2 - x2 * z[8] * z[10],
      -g * z[3] + e2 - x2 * z[9] * z[11],
      -g * z[4] + e3 - x3 * z[6] * z[10],
      -g * z[5] + e3 - x3 * z[7] * z[11],
      -k * z[6] + x1 * z[0] * z[9] + x3 * z[4] * z[11],
      -k * z[7] + x1 * z[1] * z[8] + x3 * z[5] * z[10],
      -k * z[8] + x1 * z[0] * z[7] + x2 * z[2] * z[11],
      -k * z[9] + x1 * z[1] * z[6] + x2 * z[3] * z[10],
      -k * z[10] + x2 * z[2] * z[9] + x3 * z[4] * z[7],
      -k * z[11] + x2 * z[3] * z[8] + x3 * z[5] * z[6],
  };
}

namespace detail {

/// Pump-mediated noise amplitudes sqrt(chi_k * alpha_k), one per process and
/// doubled-space sector. Sign-tracking keeps each root continuous along a
/// trajectory when the pump amplitude wanders across the negative real axis.
struct NoiseRoots {
  std::array<cd, 6> r{};  // r[0..2]: alpha sector, r[3..5]: plus sector
  bool primed = false;

  void update(const SystemParams& p, const std::array<cd, 12>& z) {
    const std::array<cd, 6> raw = {p.chi[0] * z[0], p.chi[1] * z[2], p.chi[2] * z[4],
                                   p.chi[0] * z[1], p.chi[1] * z[3], p.chi[2] * z[5]};
    for (int i = 0; i < 6; ++i) {
      cd root = std::sqrt(raw[i]);
      if (primed) {
        const cd prev = r[i];
        if ((prev.real() * root.real() + prev.imag() * root.imag()) < 0.0) root = -root;
      }
      r[i] = root;
    }
    primed = true;
  }
};

inline std::array<cd, 12> noise_from_roots(const std::array<cd, 6>& r,
                                           const std::array<cd, 6>& dW) {
  std::array<cd, 12> n{};
  n[6] = r[0] * dW[0] + r[2] * dW[2];
  n[8] = r[1] * dW[1] + r[0] * std::conj(dW[0]);
  n[10] = r[1] * std::conj(dW[1]) + r[2] * std::conj(dW[2]);
  n[7] = r[3] * dW[3] + r[5] * dW[5];
  n[9] = r[4] * dW[4] + r[3] * std::conj(dW[3]);
  n[11] = r[4] * std::conj(dW[4]) + r[5] * std::conj(dW[5]);
  return n;
}

}  // namespace detail

/// State update produced by one set of complex Wiener increments dW[0..5]
/// (principal-branch roots). Only the signal slots receive noise.
inline std::array<cd, 12> noise_increment(const SystemParams& p, const PhaseSpacePoint& pt,
                                          const std::array<cd, 6>& dW) {
  detail::NoiseRoots roots;
  roots.update(p, pt.z);
  return detail::noise_from_roots(roots.r, dW);
}

namespace detail {

inline std::array<cd, 6> draw_wiener(CounterRng& rng, double dt) {
  const double s = std::sqrt(0.5 * dt);
  std::array<cd, 6> dW;
  for (int j = 0; j < 6; ++j) {
    double re, im;
    rng.next_normal_pair(re, im);
    dW[j] = cd(s * re, s * im);
  }
  return dW;
}

inline bool bad(const std::array<cd, 12>& z, double guard) {
  for (const cd& v : z) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return true;
    if (std::abs(v) > guard) return true;
  }
  return false;
}

/// One fixed step. The noise matrix depends only on the pump variables, which
/// carry no noise themselves, so the Ito and Stratonovich forms coincide and
/// the midpoint scheme needs no drift correction.
inline void step(const SystemParams& p, const TrajectoryConfig& cfg, PhaseSpacePoint& pt,
                 NoiseRoots& roots, const std::array<cd, 6>& dW) {
  const double dt = cfg.dt;
  if (cfg.scheme == Scheme::EulerMaruyama) {
    const auto f = drift(p, pt);
    roots.update(p, pt.z);
    const auto n = cfg.noise ? noise_from_roots(roots.r, dW) : std::array<cd, 12>{};
    for (int i = 0; i < 12; ++i) pt.z[i] += f[i] * dt + n[i];
  } else {
    PhaseSpacePoint mid = pt;
    for (int it = 0; it < cfg.midpoint_iterations; ++it) {
      const auto f = drift(p, mid);
      roots.update(p, mid.z);
      const auto n = cfg.noise ? noise_from_roots(roots.r, dW) : std::array<cd, 12>{};
      for (int i = 0; i < 12; ++i) mid.z[i] = pt.z[i] + 0.5 * (f[i] * dt + n[i]);
    }
    for (int i = 0; i < 12; ++i) pt.z[i] = 2.0 * mid.z[i] - pt.z[i];
  }
  pt.t += dt;
}

}  // namespace detail

struct Trajectory {
  std::vector<double> t;
  std::vector<std::array<cd, 12>> z;
  bool diverged = false;
};

/// Integrates a single path, recording every `sample_every` interval
/// (including the initial point). The stream index selects the per-trajectory
/// noise sequence and defaults to 0.
inline Trajectory integrate_trajectory(const SystemParams& p, const TrajectoryConfig& cfg,
                                       const PhaseSpacePoint& initial, std::uint64_t stream = 0) {
  require_valid(p);
  if (!(cfg.dt > 0.0)) throw Error(ErrorCode::BadConfig, "dt must be positive");
  if (!(cfg.divergence_guard > 0.0))
    throw Error(ErrorCode::BadConfig, "divergence_guard must be positive");
  const std::size_t n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  const std::size_t stride =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.sample_every / cfg.dt)));
  CounterRng rng(cfg.seed, stream);
  detail::NoiseRoots roots;
  PhaseSpacePoint pt = initial;

  Trajectory out;
  out.t.push_back(pt.t);
  out.z.push_back(pt.z);
  for (std::size_t s = 1; s <= n_steps; ++s) {
    const auto dW = detail::draw_wiener(rng, cfg.dt);
    detail::step(p, cfg, pt, roots, dW);
    if (detail::bad(pt.z, cfg.divergence_guard)) {
      out.diverged = true;
      break;
    }
    if (s % stride == 0) {
      out.t.push_back(pt.t);
      out.z.push_back(pt.z);
    }
  }
  return out;
}

namespace detail {

struct TrajResult {
  std::array<cd, 12> first{};
  std::array<cd, 144> second{};
  bool diverged = false;
};

inline TrajResult run_one(const SystemParams& p, const TrajectoryConfig& cfg,
                          const PhaseSpacePoint& initial, std::uint64_t stream) {
  const std::size_t n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  const std::size_t burn_steps =
      static_cast<std::size_t>(std::llround(cfg.burn_in / cfg.dt));
  const std::size_t stride =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.sample_every / cfg.dt)));

  CounterRng rng(cfg.seed, stream);
  NoiseRoots roots;
  PhaseSpacePoint pt = initial;
  TrajResult res;
  std::size_t n_samples = 0;

  for (std::size_t s = 1; s <= n_steps; ++s) {
    const auto dW = draw_wiener(rng, cfg.dt);
    step(p, cfg, pt, roots, dW);
    if (bad(pt.z, cfg.divergence_guard)) {
      res.diverged = true;
      return res;
    }
    if (s >= burn_steps && (s - burn_steps) % stride == 0) {
      ++n_samples;
      for (int i = 0; i < 12; ++i) res.first[i] += pt.z[i];
      for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) res.second[12 * i + j] += pt.z[i] * pt.z[j];
    }
  }
  if (n_samples == 0) {
    res.diverged = true;  // nothing sampled; treat as unusable
    return res;
  }
  const double inv = 1.0 / static_cast<double>(n_samples);
  for (auto& v : res.first) v *= inv;
  for (auto& v : res.second) v *= inv;
  return res;
}

}  // namespace detail

/// Runs the ensemble with per-trajectory counter streams. Results are
/// bit-identical for a given (seed, config) regardless of the thread count:
/// every trajectory owns stream index = its trajectory number and the rows
/// are reduced in index order.
inline EnsembleStats integrate_ensemble(const SystemParams& p, const TrajectoryConfig& cfg,
                                        const PhaseSpacePoint& initial) {
  require_valid(p);
  if (cfg.n_traj < 1) throw Error(ErrorCode::BadConfig, "n_traj must be at least 1");
  if (!(cfg.dt > 0.0)) throw Error(ErrorCode::BadConfig, "dt must be positive");
  if (!(cfg.divergence_guard > 0.0))
    throw Error(ErrorCode::BadConfig, "divergence_guard must be positive");

  std::vector<detail::TrajResult> results(cfg.n_traj);
  unsigned n_threads = cfg.n_threads ? cfg.n_threads : std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(n_threads, cfg.n_traj));

  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) results[k] = detail::run_one(p, cfg, initial, k);
  };
  if (n_threads == 1) {
    worker(0, cfg.n_traj);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (cfg.n_traj + n_threads - 1) / n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min<std::size_t>(b + chunk, cfg.n_traj);
      if (b < e) pool.emplace_back(worker, b, e);
    }
    for (auto& th : pool) th.join();
  }

  EnsembleStats stats;
  stats.n_total = cfg.n_traj;
  for (const auto& r : results) {
    if (r.diverged) {
      ++stats.n_diverged;
      continue;
    }
    stats.traj_first.push_back(r.first);
    stats.traj_second.push_back(r.second);
  }
  if (stats.traj_first.empty())
    throw Error(ErrorCode::AllDiverged, "every trajectory hit the divergence guard");
  finalize(stats);
  return stats;
}

/// Divergence guard recommended by the steady-state scale.
inline double default_divergence_guard(const SteadyState& ss) {
  double m = 1.0;
  for (const cd& a : ss.alpha) m = std::max(m, std::abs(a));
  return 1e6 * m;
}

}  // namespace triopo
