#pragma once

#include <complex>

#include "triopo/linearization.hpp"

namespace triopo {

/// Coefficient vector mapping the fluctuation variables to one quadrature
/// combination. X_j picks (da_j + da_j+), Y_j picks -i(da_j - da_j+), so a
/// single-mode quadrature carries unit vacuum variance.
struct QuadratureSelector {
  enum class Sector { None, Pump, Signal, Mixed };

  Vec12 c = Vec12::Zero();
  double vacuum_level = 0.0;
  Sector sector = Sector::None;

  static QuadratureSelector x(int mode) {
    QuadratureSelector q;
    q.c(slot(mode, 0)) = 1.0;
    q.c(slot(mode, 1)) = 1.0;
    q.refresh();
    return q;
  }

  static QuadratureSelector y(int mode) {
    QuadratureSelector q;
    q.c(slot(mode, 0)) = cd(0.0, -1.0);
    q.c(slot(mode, 1)) = cd(0.0, 1.0);
    q.refresh();
    return q;
  }

  QuadratureSelector operator+(const QuadratureSelector& o) const {
    QuadratureSelector q;
    q.c = c + o.c;
    q.refresh();
    return q;
  }

  QuadratureSelector operator-(const QuadratureSelector& o) const {
    QuadratureSelector q;
    q.c = c - o.c;
    q.refresh();
    return q;
  }

  QuadratureSelector operator*(double s) const {
    QuadratureSelector q;
    q.c = s * c;
    q.refresh();
    return q;
  }

  /// Recomputes the shot-noise level and decay sector from the coefficients.
  void refresh() {
    cd v{};
    bool pump = false, signal = false;
    for (int m = 1; m <= 6; ++m) {
      const cd lo = c(slot(m, 0)), hi = c(slot(m, 1));
      v += lo * hi;
      if (lo != cd{} || hi != cd{}) (m <= 3 ? pump : signal) = true;
    }
    vacuum_level = v.real();
    sector = pump && signal ? Sector::Mixed
             : pump         ? Sector::Pump
             : signal       ? Sector::Signal
                            : Sector::None;
  }
};

/// Shot-noise overlap of two selectors (the vacuum term of a cross-spectrum).
inline double vacuum_overlap(const QuadratureSelector& a, const QuadratureSelector& b) {
  cd v{};
  for (int m = 1; m <= 6; ++m)
    v += a.c(slot(m, 0)) * b.c(slot(m, 1)) + a.c(slot(m, 1)) * b.c(slot(m, 0));
  return 0.5 * v.real();
}

namespace detail {

inline double cavity_rate(const LinearizedSystem& lin, const QuadratureSelector& a,
                          const QuadratureSelector& b) {
  using Sector = QuadratureSelector::Sector;
  if (a.sector == Sector::Mixed || b.sector == Sector::Mixed ||
      (a.sector != Sector::None && b.sector != Sector::None && a.sector != b.sector))
    throw Error(ErrorCode::MixedDecay,
                "selectors spanning both decay rates are not supported");
  const Sector s = a.sector != Sector::None ? a.sector : b.sector;
  return s == Sector::Pump ? lin.params.gamma : lin.params.kappa;
}

}  // namespace detail

/// Measurable output spectrum of two quadrature combinations through the
/// cavity mirror: shot noise plus 2*(decay rate) times the symmetrized
/// normally ordered intracavity spectrum.
inline double output_spectrum(const LinearizedSystem& lin, const QuadratureSelector& sel_a,
                              const QuadratureSelector& sel_b, const SpectralMatrix& sm) {
  const double rate = detail::cavity_rate(lin, sel_a, sel_b);
  const cd q_ab = sel_a.c.transpose() * sm.S * sel_b.c;
  const cd q_ba = sel_b.c.transpose() * sm.S * sel_a.c;
  return vacuum_overlap(sel_a, sel_b) + 2.0 * rate * (0.5 * (q_ab + q_ba)).real();
}

inline double output_spectrum(const LinearizedSystem& lin, const QuadratureSelector& sel_a,
                              const QuadratureSelector& sel_b, double omega) {
  return output_spectrum(lin, sel_a, sel_b, spectral_matrix(lin, omega));
}

}  // namespace triopo
