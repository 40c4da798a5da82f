#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <array>
#include <complex>

#include "triopo/params.hpp"
#include "triopo/steady_state.hpp"

namespace triopo {

using Mat12 = Eigen::Matrix<cd, 12, 12>;
using Vec12 = Eigen::Matrix<cd, 12, 1>;

/// Drift matrix of the fluctuation equations about a steady state, in the
/// slot ordering (da1, da1+, ..., da6, da6+): pump block -gamma*I, signal
/// block with -kappa diagonal and pump-amplitude couplings, off-diagonal
/// blocks carrying the signal-amplitude couplings.
inline Mat12 build_drift(const SystemParams& p, const SteadyState& ss) {
  require_valid(p);
  const double x1 = p.chi[0], x2 = p.chi[1], x3 = p.chi[2];
  const cd a1 = ss.amp(1), a2 = ss.amp(2), a3 = ss.amp(3);
  const cd a4 = ss.amp(4), a5 = ss.amp(5), a6 = ss.amp(6);
  const auto cj = [](cd v) { return std::conj(v); };

  Eigen::Matrix<cd, 6, 6> a2_block;
  a2_block << x1 * a5, 0, x1 * a4, 0, 0, 0,
      0, x1 * cj(a5), 0, x1 * cj(a4), 0, 0,
      0, 0, x2 * a6, 0, x2 * a5, 0,
      0, 0, 0, x2 * cj(a6), 0, x2 * cj(a5),
      x3 * a6, 0, 0, 0, x3 * a4, 0,
      0, x3 * cj(a6), 0, 0, 0, x3 * cj(a4);

  const double k = p.kappa;
  Eigen::Matrix<cd, 6, 6> a3_block;
  a3_block << -k, 0, 0, x1 * a1, 0, x3 * a3,
      0, -k, x1 * cj(a1), 0, x3 * cj(a3), 0,
      0, x1 * a1, -k, 0, 0, x2 * a2,
      x1 * cj(a1), 0, 0, -k, x2 * cj(a2), 0,
      0, x3 * a3, 0, x2 * a2, -k, 0,
      x3 * cj(a3), 0, x2 * cj(a2), 0, 0, -k;

  Mat12 a = Mat12::Zero();
  a.topLeftCorner<6, 6>() = -p.gamma * Eigen::Matrix<cd, 6, 6>::Identity();
  a.topRightCorner<6, 6>() = -a2_block;
  a.bottomLeftCorner<6, 6>() = a2_block.conjugate().transpose();
  a.bottomRightCorner<6, 6>() = a3_block;
  return a;
}

/// Noise matrix of the linearized equations over twelve independent real
/// Wiener increments: each complex dW_j = (xi_{2j-1} + i xi_{2j})/sqrt(2),
/// with amplitudes sqrt(chi_k * pump amplitude) frozen at the steady state.
inline Mat12 build_noise_matrix(const SystemParams& p, const SteadyState& ss) {
  require_valid(p);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const cd i_unit(0.0, 1.0);
  const std::array<cd, 6> root = {
      std::sqrt(p.chi[0] * ss.amp(1)), std::sqrt(p.chi[1] * ss.amp(2)),
      std::sqrt(p.chi[2] * ss.amp(3)), std::sqrt(p.chi[0] * ss.amp(1, 1)),
      std::sqrt(p.chi[1] * ss.amp(2, 1)), std::sqrt(p.chi[2] * ss.amp(3, 1))};

  Mat12 b = Mat12::Zero();
  // row, amplitude, real-noise column pair, conjugated complex Wiener or not
  const auto put = [&](int row, cd amp, int pair, bool conj_w) {
    const cd sgn = conj_w ? -i_unit : i_unit;
    b(row, 2 * pair) += amp * inv_sqrt2;
    b(row, 2 * pair + 1) += amp * sgn * inv_sqrt2;
  };
  put(6, root[0], 0, false);   // alpha4:  r1 dW1
  put(6, root[2], 2, false);   //          r3 dW3
  put(8, root[1], 1, false);   // alpha5:  r2 dW2
  put(8, root[0], 0, true);    //          r1 dW1*
  put(10, root[1], 1, true);   // alpha6:  r2 dW2*
  put(10, root[2], 2, true);   //          r3 dW3*
  put(7, root[3], 3, false);   // alpha4+: q1 dW4
  put(7, root[5], 5, false);   //          q3 dW6
  put(9, root[4], 4, false);   // alpha5+: q2 dW5
  put(9, root[3], 3, true);    //          q1 dW4*
  put(11, root[4], 4, true);   // alpha6+: q2 dW5*
  put(11, root[5], 5, true);   //          q3 dW6*
  return b;
}

/// Diffusion matrix D = B Bt of the fluctuation OU process.
inline Mat12 build_diffusion(const SystemParams& p, const SteadyState& ss) {
  const Mat12 b = build_noise_matrix(p, ss);
  return b * b.transpose();
}

/// The same diffusion matrix from its closed-form pairing structure: the only
/// nonzero entries couple the two signal modes of each pump process, with
/// weight chi_k * (pump amplitude).
inline Mat12 diffusion_closed_form(const SystemParams& p, const SteadyState& ss) {
  Mat12 d = Mat12::Zero();
  const auto put = [&](int ma, int mb, cd v) {
    d(slot(ma, 0), slot(mb, 0)) = v;
    d(slot(mb, 0), slot(ma, 0)) = v;
    d(slot(ma, 1), slot(mb, 1)) = std::conj(v);
    d(slot(mb, 1), slot(ma, 1)) = std::conj(v);
  };
  put(4, 5, p.chi[0] * ss.amp(1));
  put(4, 6, p.chi[2] * ss.amp(3));
  put(5, 6, p.chi[1] * ss.amp(2));
  return d;
}

struct StabilityResult {
  Vec12 eigenvalues;
  bool is_stable = false;
};

inline StabilityResult stability_eigenvalues(const Mat12& a) {
  Eigen::ComplexEigenSolver<Mat12> solver(a, /*computeEigenvectors=*/false);
  StabilityResult r;
  r.eigenvalues = solver.eigenvalues();
  r.is_stable = true;
  for (int i = 0; i < 12; ++i)
    if (r.eigenvalues(i).real() >= 0.0) r.is_stable = false;
  return r;
}

/// Drift, diffusion and stability data about one steady state.
struct LinearizedSystem {
  SystemParams params;
  SteadyState ss;
  Mat12 A;
  Mat12 D;
  Vec12 eigenvalues;
  bool is_stable = false;
};

inline LinearizedSystem build_linearized(const SystemParams& p, const SteadyState& ss) {
  LinearizedSystem lin;
  lin.params = p;
  lin.ss = ss;
  lin.A = build_drift(p, ss);
  lin.D = build_diffusion(p, ss);
  const auto st = stability_eigenvalues(lin.A);
  lin.eigenvalues = st.eigenvalues;
  lin.is_stable = st.is_stable;
  return lin;
}

/// Stationary covariance sigma solving A sigma + sigma At + D = 0, via the
/// Kronecker-vectorized linear system.
inline Mat12 stationary_covariance(const Mat12& a, const Mat12& d) {
  if (!stability_eigenvalues(a).is_stable)
    throw Error(ErrorCode::Unstable, "stationary covariance needs a stable drift matrix");
  using MatN = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic>;
  using VecN = Eigen::Matrix<cd, Eigen::Dynamic, 1>;
  MatN k = MatN::Zero(144, 144);
  // vec(A sigma) = (I kron A) vec(sigma); vec(sigma At) = (A kron I) vec(sigma)
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) {
      for (int r = 0; r < 12; ++r) {
        k(12 * j + i, 12 * j + r) += a(i, r);
        k(12 * j + i, 12 * r + i) += a(j, r);
      }
    }
  VecN rhs(144);
  for (int j = 0; j < 12; ++j)
    for (int i = 0; i < 12; ++i) rhs(12 * j + i) = -d(i, j);
  const VecN x = k.partialPivLu().solve(rhs);
  Mat12 sigma;
  for (int j = 0; j < 12; ++j)
    for (int i = 0; i < 12; ++i) sigma(i, j) = x(12 * j + i);
  return sigma;
}

inline Mat12 stationary_covariance(const LinearizedSystem& lin) {
  if (!lin.is_stable)
    throw Error(ErrorCode::Unstable, "stationary covariance needs a stable drift matrix");
  return stationary_covariance(lin.A, lin.D);
}

/// Two-sided stationary spectral matrix of the OU process at one frequency.
struct SpectralMatrix {
  double omega = 0.0;
  Mat12 S;
};

namespace detail {

inline Mat12 spectral_matrix_unchecked(const Mat12& a, const Mat12& d, double omega) {
  const cd iw(0.0, omega);
  Mat12 m = -a;
  m.diagonal().array() += iw;
  const Mat12 t = m.partialPivLu().solve(d);
  // S = T (-iw I - At)^{-1}; transpose of that factor is (-iw I - A)
  Mat12 mt = -a;
  mt.diagonal().array() -= iw;
  return mt.partialPivLu().solve(t.transpose()).transpose();
}

}  // namespace detail

inline SpectralMatrix spectral_matrix(const Mat12& a, const Mat12& d, double omega) {
  if (!stability_eigenvalues(a).is_stable)
    throw Error(ErrorCode::Unstable, "spectral matrix needs a stable drift matrix");
  return {omega, detail::spectral_matrix_unchecked(a, d, omega)};
}

inline SpectralMatrix spectral_matrix(const LinearizedSystem& lin, double omega) {
  if (!lin.is_stable)
    throw Error(ErrorCode::Unstable, "spectral matrix needs a stable drift matrix");
  return {omega, detail::spectral_matrix_unchecked(lin.A, lin.D, omega)};
}

}  // namespace triopo
