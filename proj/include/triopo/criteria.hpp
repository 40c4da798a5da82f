#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "triopo/spectra.hpp"

namespace triopo {

namespace detail {

inline void require_signal_pair(int i, int j) {
  if (i < 4 || i > 6 || j < 4 || j > 6 || i == j)
    throw Error(ErrorCode::BadConfig, "pair indices must be distinct signal modes 4..6");
}

inline QuadratureSelector y_sum() {
  return QuadratureSelector::y(4) + QuadratureSelector::y(5) + QuadratureSelector::y(6);
}

}  // namespace detail

/// Combination spectrum S_out[X_i - X_j] + S_out[Y_4 + Y_5 + Y_6] whose value
/// below 4 witnesses entanglement of the signal pair; two simultaneous pair
/// violations certify genuine tripartite entanglement.
inline double vlf_spectrum(const LinearizedSystem& lin, int i, int j, const SpectralMatrix& sm) {
  detail::require_signal_pair(i, j);
  const auto diff = QuadratureSelector::x(i) - QuadratureSelector::x(j);
  const auto ysum = detail::y_sum();
  return output_spectrum(lin, diff, diff, sm) + output_spectrum(lin, ysum, ysum, sm);
}

inline double vlf_spectrum(const LinearizedSystem& lin, int i, int j, double omega) {
  return vlf_spectrum(lin, i, j, spectral_matrix(lin, omega));
}

constexpr double kVlfBound = 4.0;
constexpr double kEprJointBound = 4.0;
constexpr double kEprSingleBound = 1.0;

/// Closed-form combination spectrum below threshold, with alpha = E/gamma.
inline double analytic_below(const SystemParams& p, double pump, double omega) {
  require_valid(p);
  require_symmetric(p);
  if (!(pump < threshold_pump(p)))
    throw Error(ErrorCode::WrongBranch, "closed form valid below threshold only");
  const double k = p.kappa;
  const double g = p.chi[0] * pump / p.gamma;  // chi * alpha
  const double num = 8.0 * k * g * (7.0 * g * g + 10.0 * k * g + 4.0 * (omega * omega + k * k));
  const double den = ((g + k) * (g + k) + omega * omega) *
                     ((2.0 * g + k) * (2.0 * g + k) + omega * omega);
  return 5.0 - num / den;
}

/// Closed-form combination spectrum above threshold, with
/// beta = sqrt((E - E_th)/chi).
inline double analytic_above(const SystemParams& p, double pump, double omega) {
  require_valid(p);
  require_symmetric(p);
  const double e_th = threshold_pump(p);
  if (!(pump > e_th))
    throw Error(ErrorCode::WrongBranch, "closed form valid above threshold only");
  const double k = p.kappa, g = p.gamma, w2 = omega * omega;
  const double h = p.chi[0] * (pump - e_th);  // (chi * beta)^2
  const double num =
      4.0 * k * k * (w2 + g * g) *
      (76.0 * h * h + h * (100.0 * g * k - 56.0 * w2) + (w2 + g * g) * (16.0 * w2 + 43.0 * k * k));
  const double f1 = (4.0 * h + 2.0 * g * k - w2) * (4.0 * h + 2.0 * g * k - w2) +
                    (2.0 * k + g) * (2.0 * k + g) * w2;
  const double f2 = (2.0 * h + 3.0 * g * k - 2.0 * w2) * (2.0 * h + 3.0 * g * k - 2.0 * w2) +
                    (3.0 * k + 2.0 * g) * (3.0 * k + 2.0 * g) * w2;
  return 5.0 - num / (f1 * f2);
}

/// Branch-dispatching closed form for a symmetric off-threshold drive.
inline double analytic_vlf(const SystemParams& p, double pump, double omega) {
  return pump < threshold_pump(p) ? analytic_below(p, pump, omega)
                                  : analytic_above(p, pump, omega);
}

constexpr double kInferenceGuard = 1e-14;

/// Inferred spectrum of a target combination given a conditioning one,
/// minimized over linear estimators: S[target] - S[target, cond]^2 / S[cond].
inline double inferred_spectrum(const LinearizedSystem& lin, const QuadratureSelector& target,
                                const QuadratureSelector& cond, const SpectralMatrix& sm) {
  const double s_cond = output_spectrum(lin, cond, cond, sm);
  if (!(std::abs(s_cond) > kInferenceGuard))
    throw Error(ErrorCode::DegenerateInference, "conditioning spectrum vanishes");
  const double cross = output_spectrum(lin, target, cond, sm);
  return output_spectrum(lin, target, target, sm) - cross * cross / s_cond;
}

namespace detail {

inline std::array<int, 2> partners(int i) {
  switch (i) {
    case 4: return {5, 6};
    case 5: return {4, 6};
    case 6: return {4, 5};
    default: throw Error(ErrorCode::BadConfig, "mode must be a signal mode 4..6");
  }
}

}  // namespace detail

/// EPR product from measurements on mode i inferring the joint quadratures
/// X_j +/- X_k and Y_j +/- Y_k of the other two signal modes; a value below 4
/// demonstrates the paradox.
inline double epr_joint_inference(const LinearizedSystem& lin, int infer_from, int sign,
                                  const SpectralMatrix& sm) {
  const auto [j, k] = detail::partners(infer_from);
  const double s = sign >= 0 ? 1.0 : -1.0;
  const auto pair_x = QuadratureSelector::x(j) + QuadratureSelector::x(k) * s;
  const auto pair_y = QuadratureSelector::y(j) + QuadratureSelector::y(k) * s;
  const double sx = inferred_spectrum(lin, pair_x, QuadratureSelector::x(infer_from), sm);
  const double sy = inferred_spectrum(lin, pair_y, QuadratureSelector::y(infer_from), sm);
  return sx * sy;
}

inline double epr_joint_inference(const LinearizedSystem& lin, int infer_from, int sign,
                                  double omega) {
  return epr_joint_inference(lin, infer_from, sign, spectral_matrix(lin, omega));
}

/// EPR product from measurements on the joint modes j,k inferring mode i;
/// a value below 1 demonstrates the paradox.
inline double epr_single_inference(const LinearizedSystem& lin, int target, int sign,
                                   const SpectralMatrix& sm) {
  const auto [j, k] = detail::partners(target);
  const double s = sign >= 0 ? 1.0 : -1.0;
  const auto pair_x = QuadratureSelector::x(j) + QuadratureSelector::x(k) * s;
  const auto pair_y = QuadratureSelector::y(j) + QuadratureSelector::y(k) * s;
  const double sx = inferred_spectrum(lin, QuadratureSelector::x(target), pair_x, sm);
  const double sy = inferred_spectrum(lin, QuadratureSelector::y(target), pair_y, sm);
  return sx * sy;
}

inline double epr_single_inference(const LinearizedSystem& lin, int target, int sign,
                                   double omega) {
  return epr_single_inference(lin, target, sign, spectral_matrix(lin, omega));
}

/// All entanglement and EPR criteria over a frequency grid.
struct CriteriaReport {
  std::vector<double> omega_grid;
  // pair order (4,5), (4,6), (5,6)
  std::array<std::vector<double>, 3> i_out;
  std::vector<double> i_out_analytic;
  // partition order: inferring mode / target mode 4, 5, 6
  std::array<std::vector<double>, 3> epr_joint;
  std::array<std::vector<double>, 3> epr_single;
  std::array<std::vector<bool>, 3> i_out_violated;
  std::array<std::vector<bool>, 3> epr_joint_violated;
  std::array<std::vector<bool>, 3> epr_single_violated;
  std::vector<bool> genuine_tripartite;  // two pair criteria violated at once
  double max_analytic_residual = 0.0;    // |numeric - analytic| / |analytic|
};

inline CriteriaReport full_report(const SystemParams& p, double pump,
                                  const std::vector<double>& omega_grid,
                                  double threshold_guard = 1e-6, int epr_sign = +1) {
  SystemParams q = p;
  q.pump = {pump, pump, pump};
  const SteadyState ss = steady_state(q, threshold_guard);
  const LinearizedSystem lin = build_linearized(q, ss);
  if (!lin.is_stable) throw Error(ErrorCode::Unstable, "steady state is not stable");

  static constexpr std::array<std::array<int, 2>, 3> kPairs = {{{4, 5}, {4, 6}, {5, 6}}};
  CriteriaReport rep;
  rep.omega_grid = omega_grid;
  for (double w : omega_grid) {
    const SpectralMatrix sm = spectral_matrix(lin, w);
    const double analytic = analytic_vlf(q, pump, w);
    rep.i_out_analytic.push_back(analytic);
    for (int c = 0; c < 3; ++c) {
      const double v = vlf_spectrum(lin, kPairs[c][0], kPairs[c][1], sm);
      rep.i_out[c].push_back(v);
      rep.i_out_violated[c].push_back(v < kVlfBound);
      rep.max_analytic_residual =
          std::max(rep.max_analytic_residual, std::abs(v - analytic) / std::abs(analytic));
    }
    int n_violated = 0;
    for (int c = 0; c < 3; ++c) n_violated += rep.i_out_violated[c].back() ? 1 : 0;
    rep.genuine_tripartite.push_back(n_violated >= 2);
    for (int c = 0; c < 3; ++c) {
      const int mode = 4 + c;
      const double ej = epr_joint_inference(lin, mode, epr_sign, sm);
      const double es = epr_single_inference(lin, mode, epr_sign, sm);
      rep.epr_joint[c].push_back(ej);
      rep.epr_single[c].push_back(es);
      rep.epr_joint_violated[c].push_back(ej < kEprJointBound);
      rep.epr_single_violated[c].push_back(es < kEprSingleBound);
    }
  }
  return rep;
}

}  // namespace triopo
