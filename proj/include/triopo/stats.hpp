#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "triopo/errors.hpp"
#include "triopo/steady_state.hpp"

namespace triopo {

/// Standard errors of a complex estimator, one per real component.
struct ComponentSe {
  double re = 0.0;
  double im = 0.0;
};

struct MomentValue {
  cd value{};
  ComponentSe se{};
};

/// Monte-Carlo moment accumulators over a positive-P trajectory ensemble.
///
/// Each surviving trajectory contributes one row of time-averaged first
/// moments and one row of time-averaged pair products; ensemble means and
/// jackknife errors are derived from the rows, so merging is associative and
/// independent of evaluation order. Mixed alpha/alpha+ products read off
/// normally ordered operator moments directly.
struct EnsembleStats {
  std::size_t n_total = 0;
  std::size_t n_diverged = 0;

  std::vector<std::array<cd, 12>> traj_first;
  std::vector<std::array<cd, 144>> traj_second;

  std::array<cd, 12> first{};
  std::array<cd, 144> second{};
  std::array<ComponentSe, 12> first_se{};
  std::array<ComponentSe, 144> second_se{};

  std::size_t n_effective() const { return n_total - n_diverged; }

  static int pair_index(int slot_a, int slot_b) { return 12 * slot_a + slot_b; }
};

namespace detail {

/// Jackknife standard error of the plain mean of n scalar samples.
inline ComponentSe mean_se(const std::vector<cd>& xs) {
  const std::size_t n = xs.size();
  cd mean{};
  for (const cd& x : xs) mean += x;
  mean /= static_cast<double>(n);
  double vr = 0.0, vi = 0.0;
  for (const cd& x : xs) {
    vr += (x.real() - mean.real()) * (x.real() - mean.real());
    vi += (x.imag() - mean.imag()) * (x.imag() - mean.imag());
  }
  const double f = 1.0 / (static_cast<double>(n) * static_cast<double>(n - 1));
  return {std::sqrt(vr * f), std::sqrt(vi * f)};
}

}  // namespace detail

/// Fills the aggregate means and standard errors from the per-trajectory rows.
inline void finalize(EnsembleStats& s) {
  const std::size_t n = s.traj_first.size();
  if (n == 0) throw Error(ErrorCode::AllDiverged, "no trajectories survived the divergence guard");
  std::vector<cd> col(n);
  for (int i = 0; i < 12; ++i) {
    for (std::size_t k = 0; k < n; ++k) col[k] = s.traj_first[k][i];
    cd m{};
    for (const cd& x : col) m += x;
    s.first[i] = m / static_cast<double>(n);
    s.first_se[i] = n > 1 ? detail::mean_se(col) : ComponentSe{};
  }
  for (int ij = 0; ij < 144; ++ij) {
    for (std::size_t k = 0; k < n; ++k) col[k] = s.traj_second[k][ij];
    cd m{};
    for (const cd& x : col) m += x;
    s.second[ij] = m / static_cast<double>(n);
    s.second_se[ij] = n > 1 ? detail::mean_se(col) : ComponentSe{};
  }
}

/// Ensemble average of a first or second stochastic moment with jackknife
/// standard errors. `slots` holds one or two phase-space indices; two slots
/// request the product moment <z_a z_b>.
inline MomentValue moments(const EnsembleStats& s, const std::vector<int>& slots) {
  if (s.n_effective() < 2)
    throw Error(ErrorCode::InsufficientData, "need at least two surviving trajectories");
  if (slots.size() == 1) {
    return {s.first[slots[0]], s.first_se[slots[0]]};
  }
  if (slots.size() == 2) {
    const int ij = EnsembleStats::pair_index(slots[0], slots[1]);
    return {s.second[ij], s.second_se[ij]};
  }
  throw Error(ErrorCode::InsufficientData, "moment request must name one or two slots");
}

/// Fluctuation covariance <z_i z_j> - <z_i><z_j> with jackknife errors.
struct CovarianceTable {
  std::array<cd, 144> cov{};
  std::array<ComponentSe, 144> se{};
};

inline CovarianceTable fluctuation_covariance(const EnsembleStats& s) {
  const std::size_t n = s.traj_first.size();
  if (n < 2) throw Error(ErrorCode::InsufficientData, "need at least two surviving trajectories");
  const double dn = static_cast<double>(n);

  std::array<cd, 12> sum1{};
  std::array<cd, 144> sum2{};
  for (std::size_t k = 0; k < n; ++k)
    for (int i = 0; i < 12; ++i) sum1[i] += s.traj_first[k][i];
  for (std::size_t k = 0; k < n; ++k)
    for (int ij = 0; ij < 144; ++ij) sum2[ij] += s.traj_second[k][ij];

  CovarianceTable out;
  std::vector<cd> loo(n);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      const int ij = EnsembleStats::pair_index(i, j);
      const cd m1i = sum1[i] / dn, m1j = sum1[j] / dn, m2 = sum2[ij] / dn;
      out.cov[ij] = m2 - m1i * m1j;
      cd loo_mean{};
      for (std::size_t k = 0; k < n; ++k) {
        const cd a = (sum1[i] - s.traj_first[k][i]) / (dn - 1.0);
        const cd b = (sum1[j] - s.traj_first[k][j]) / (dn - 1.0);
        const cd p = (sum2[ij] - s.traj_second[k][ij]) / (dn - 1.0);
        loo[k] = p - a * b;
        loo_mean += loo[k];
      }
      loo_mean /= dn;
      double vr = 0.0, vi = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        vr += (loo[k].real() - loo_mean.real()) * (loo[k].real() - loo_mean.real());
        vi += (loo[k].imag() - loo_mean.imag()) * (loo[k].imag() - loo_mean.imag());
      }
      const double f = (dn - 1.0) / dn;
      out.se[ij] = {std::sqrt(f * vr), std::sqrt(f * vi)};
    }
  }
  return out;
}

/// z-score of an estimate against a reference, per real component; estimates
/// that are exact (zero spread, zero deviation) count as z = 0.
inline double z_score(cd estimate, cd reference, const ComponentSe& se) {
  auto comp = [](double diff, double s) {
    if (std::abs(diff) < 1e-12 && s < 1e-15) return 0.0;
    return diff / (s > 0.0 ? s : 1e-300);
  };
  const double zr = comp(estimate.real() - reference.real(), se.re);
  const double zi = comp(estimate.imag() - reference.imag(), se.im);
  return std::max(std::abs(zr), std::abs(zi));
}

}  // namespace triopo
