#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "triopo/errors.hpp"

namespace triopo {

/// Physical constants of the triply concurrent OPO cavity.
///
/// Modes 1-3 are the pumped high-frequency modes (decay rate gamma), modes
/// 4-6 the down-converted signal modes (decay rate kappa). chi[k] is the
/// coupling of process k (pump k feeding its signal pair), pump[k] the
/// classical drive amplitude of pump k. All rates are in inverse time units
/// of kappa when used from the CLI (kappa defaults to 1).
struct SystemParams {
  std::array<double, 3> chi{0.01, 0.01, 0.01};
  double gamma = 10.0;
  double kappa = 1.0;
  std::array<double, 3> pump{0.0, 0.0, 0.0};

  bool symmetric() const {
    return chi[0] == chi[1] && chi[1] == chi[2] && pump[0] == pump[1] && pump[1] == pump[2];
  }
};

/// Checks the domain invariants; an empty list means the parameters are usable.
inline std::vector<std::string> validate(const SystemParams& p) {
  std::vector<std::string> errs;
  for (int k = 0; k < 3; ++k) {
    if (!(p.chi[k] > 0.0) || !std::isfinite(p.chi[k]))
      errs.push_back("chi[" + std::to_string(k + 1) + "] must be positive");
  }
  if (!(p.gamma > 0.0) || !std::isfinite(p.gamma)) errs.push_back("gamma must be positive");
  if (!(p.kappa > 0.0) || !std::isfinite(p.kappa)) errs.push_back("kappa must be positive");
  for (int k = 0; k < 3; ++k) {
    if (!(p.pump[k] >= 0.0) || !std::isfinite(p.pump[k]))
      errs.push_back("pump[" + std::to_string(k + 1) + "] must be non-negative");
  }
  return errs;
}

inline void require_valid(const SystemParams& p) {
  auto errs = validate(p);
  if (!errs.empty()) {
    std::string msg;
    for (const auto& e : errs) {
      if (!msg.empty()) msg += "; ";
      msg += e;
    }
    throw Error(ErrorCode::InvalidParams, msg);
  }
}

inline void require_symmetric(const SystemParams& p) {
  if (!(p.chi[0] == p.chi[1] && p.chi[1] == p.chi[2]))
    throw Error(ErrorCode::AsymmetricPumps, "all three chi must be equal");
  if (!(p.pump[0] == p.pump[1] && p.pump[1] == p.pump[2]))
    throw Error(ErrorCode::AsymmetricPumps, "all three pump amplitudes must be equal");
}

/// Oscillation threshold of the symmetric configuration: E_th = gamma*kappa/(2*chi).
inline double threshold_pump(const SystemParams& p) {
  require_valid(p);
  if (!(p.chi[0] == p.chi[1] && p.chi[1] == p.chi[2]))
    throw Error(ErrorCode::AsymmetricPumps, "threshold is defined for equal chi");
  return p.gamma * p.kappa / (2.0 * p.chi[0]);
}

}  // namespace triopo
