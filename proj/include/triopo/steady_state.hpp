#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "triopo/params.hpp"

namespace triopo {

using cd = std::complex<double>;

/// Phase-space vector ordering: (a1, a1+, a2, a2+, ..., a6, a6+).
/// Modes are numbered 1..6; dag = 0 selects the alpha variable, dag = 1 its
/// independent plus-partner.
inline constexpr int slot(int mode, int dag) { return 2 * (mode - 1) + dag; }

enum class Branch { BelowThreshold, AboveThreshold };

/// Semiclassical steady state of the symmetric configuration, with the
/// plus-partner slots filled by conjugate pairing (alpha+ = alpha*).
struct SteadyState {
  std::array<cd, 12> alpha{};
  Branch branch = Branch::BelowThreshold;
  double pump_ratio = 0.0;  // E / E_th

  cd amp(int mode, int dag = 0) const { return alpha[slot(mode, dag)]; }
};

/// Steady state on the stable branch for the given symmetric drive.
///
/// Below threshold the pumps hold E/gamma and the signals stay empty; above
/// threshold the pumps clamp at kappa/(2*chi) and the signals take the
/// positive real root of (E - E_th)/chi. A relative guard band around E_th
/// rejects configurations where the fluctuations are undamped and the
/// linearized treatment is meaningless.
inline SteadyState steady_state(const SystemParams& p, double threshold_guard = 1e-6) {
  require_valid(p);
  require_symmetric(p);
  const double chi = p.chi[0];
  const double E = p.pump[0];
  const double e_th = threshold_pump(p);
  const double ratio = E / e_th;

  if (std::abs(E - e_th) <= threshold_guard * e_th)
    throw Error(ErrorCode::AtThreshold,
                "pump within guard band of threshold; fluctuations are undamped");

  SteadyState ss;
  ss.pump_ratio = ratio;
  if (E < e_th) {
    ss.branch = Branch::BelowThreshold;
    const double a = E / p.gamma;
    for (int m = 1; m <= 3; ++m) {
      ss.alpha[slot(m, 0)] = a;
      ss.alpha[slot(m, 1)] = a;
    }
  } else {
    ss.branch = Branch::AboveThreshold;
    const double a = p.kappa / (2.0 * chi);
    const double b = std::sqrt((E - e_th) / chi);
    for (int m = 1; m <= 3; ++m) {
      ss.alpha[slot(m, 0)] = a;
      ss.alpha[slot(m, 1)] = a;
    }
    for (int m = 4; m <= 6; ++m) {
      ss.alpha[slot(m, 0)] = b;
      ss.alpha[slot(m, 1)] = b;
    }
  }
  return ss;
}

/// |alpha4|^2 / |alpha1|^2, the bright-beam intensity ratio of signal to pump.
inline double intensity_ratio(const SteadyState& ss) {
  if (ss.branch != Branch::AboveThreshold)
    throw Error(ErrorCode::WrongBranch, "intensity ratio needs the above-threshold branch");
  return std::norm(ss.amp(4)) / std::norm(ss.amp(1));
}

}  // namespace triopo
