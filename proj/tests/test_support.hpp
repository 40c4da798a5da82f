#pragma once

#include <random>

#include "triopo/params.hpp"

namespace triopo::test {

/// Canonical benchmark configuration: chi = 0.01, kappa = 1, gamma = 10,
/// threshold drive 500.
inline SystemParams bench(double pump = 0.0) {
  SystemParams p;
  p.chi = {0.01, 0.01, 0.01};
  p.gamma = 10.0;
  p.kappa = 1.0;
  p.pump = {pump, pump, pump};
  return p;
}

/// Random valid symmetric parameter sets for property-style tests.
class ParamGen {
 public:
  explicit ParamGen(unsigned seed) : rng_(seed) {}

  SystemParams draw(double ratio_lo, double ratio_hi) {
    SystemParams p;
    const double chi = std::exp(uni(-6.0, 0.0));
    p.chi = {chi, chi, chi};
    p.gamma = std::exp(uni(-1.0, 3.0));
    p.kappa = std::exp(uni(-2.0, 1.0));
    const double e_th = p.gamma * p.kappa / (2.0 * chi);
    const double e = e_th * uni(ratio_lo, ratio_hi);
    p.pump = {e, e, e};
    return p;
  }

  double uni(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

 private:
  std::mt19937 rng_;
};

}  // namespace triopo::test
