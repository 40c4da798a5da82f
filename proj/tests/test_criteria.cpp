#include <doctest.h>

#include <cmath>
#include <vector>

#include "test_support.hpp"
#include "triopo/criteria.hpp"

using namespace triopo;
using triopo::test::bench;

TEST_CASE("closed form below threshold hits the benchmark anchors") {
  const auto p = bench();
  // zero-frequency limit approaching threshold is 2/9
  CHECK(analytic_below(p, 500.0 * (1.0 - 1e-9), 0.0) ==
        doctest::Approx(2.0 / 9.0).epsilon(1e-6));
  // uncorrelated limit of 5 at large frequency
  CHECK(analytic_below(p, 450.0, 1e4) == doctest::Approx(5.0).epsilon(1e-6));
  // hand substitution at chi*alpha = 0.45, kappa = 1, omega = 0
  CHECK(analytic_below(p, 450.0, 0.0) ==
        doctest::Approx(5.0 - 35.703 / 7.590025).epsilon(1e-12));
  CHECK_THROWS_AS(analytic_below(p, 550.0, 0.0), Error);
}

TEST_CASE("closed form above threshold hits the benchmark anchors") {
  const auto p = bench();
  // hand substitution at (chi*beta)^2 = 0.5, gamma = 10, kappa = 1, omega = 0
  CHECK(analytic_above(p, 550.0, 0.0) ==
        doctest::Approx(5.0 - 1927600.0 / 465124.0).epsilon(1e-12));
  CHECK(analytic_above(p, 550.0, 1e4) == doctest::Approx(5.0).epsilon(1e-6));
  CHECK_THROWS_AS(analytic_above(p, 450.0, 0.0), Error);
  try {
    analytic_above(p, 450.0, 0.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongBranch);
  }
}

TEST_CASE("the two branch forms meet at the threshold value 2/9") {
  const auto p = bench();
  CHECK(analytic_below(p, 500.0 * (1.0 - 1e-10), 0.0) ==
        doctest::Approx(analytic_above(p, 500.0 * (1.0 + 1e-10), 0.0)).epsilon(1e-8));
}

TEST_CASE("vacuum input gives the uncorrelated level 5 everywhere") {
  const auto p = bench(0.0);
  const auto lin = build_linearized(p, steady_state(p));
  for (double w : {0.0, 1.0, 4.5}) {
    CHECK(vlf_spectrum(lin, 4, 5, w) == doctest::Approx(5.0).epsilon(1e-14));
  }
}

TEST_CASE("numeric spectra agree with the closed forms on both branches") {
  for (double ratio : {0.5, 0.9, 0.99, 1.01, 1.1, 1.5}) {
    const auto p = bench(500.0 * ratio);
    const auto lin = build_linearized(p, steady_state(p));
    for (double w = 0.0; w <= 6.0; w += 0.05) {
      const double numeric = vlf_spectrum(lin, 4, 5, w);
      const double analytic = analytic_vlf(p, p.pump[0], w);
      CHECK(std::abs(numeric - analytic) < 1e-8 * std::abs(analytic));
    }
  }
}

TEST_CASE("violation values at the benchmark drives") {
  const auto below = bench(450.0);
  const auto lin_b = build_linearized(below, steady_state(below));
  const double v_b = vlf_spectrum(lin_b, 4, 5, 0.0);
  CHECK(v_b < 4.0);
  CHECK(v_b == doctest::Approx(5.0 - 35.703 / 7.590025).epsilon(1e-8));

  const auto above = bench(550.0);
  const auto lin_a = build_linearized(above, steady_state(above));
  const double v_a = vlf_spectrum(lin_a, 4, 5, 0.0);
  CHECK(v_a < 4.0);
  CHECK(v_a == doctest::Approx(5.0 - 1927600.0 / 465124.0).epsilon(1e-8));
}

TEST_CASE("EPR products against vacuum inputs show no paradox") {
  const auto p = bench(0.0);
  const auto lin = build_linearized(p, steady_state(p));
  const auto sm = spectral_matrix(lin, 0.3);
  CHECK(epr_joint_inference(lin, 4, +1, sm) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(epr_single_inference(lin, 4, +1, sm) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("below threshold the two normalized inference products coincide") {
  const auto p = bench(450.0);
  const auto lin = build_linearized(p, steady_state(p));
  for (double w = 0.0; w <= 6.0; w += 0.2) {
    const auto sm = spectral_matrix(lin, w);
    const double joint = epr_joint_inference(lin, 4, +1, sm) / kEprJointBound;
    const double single = epr_single_inference(lin, 4, +1, sm) / kEprSingleBound;
    CHECK(std::abs(joint - single) < 1e-6 * std::abs(single));
  }
}

TEST_CASE("above threshold both EPR criteria are violated near zero frequency") {
  const auto p = bench(550.0);
  const auto lin = build_linearized(p, steady_state(p));
  const auto sm = spectral_matrix(lin, 0.0);
  const double joint = epr_joint_inference(lin, 4, +1, sm);
  const double single = epr_single_inference(lin, 4, +1, sm);
  CHECK(joint < kEprJointBound);
  CHECK(single < kEprSingleBound);
  // inference from the two-mode combination violates at least as strongly
  for (double w = 0.0; w <= 6.0; w += 0.2) {
    const auto smw = spectral_matrix(lin, w);
    const double jn = epr_joint_inference(lin, 4, +1, smw) / kEprJointBound;
    const double sn = epr_single_inference(lin, 4, +1, smw) / kEprSingleBound;
    CHECK(sn <= jn + 1e-9);
  }
}

TEST_CASE("implemented inference gain is the minimizing estimator") {
  for (double pump : {450.0, 550.0}) {
    const auto p = bench(pump);
    const auto lin = build_linearized(p, steady_state(p));
    const auto x4 = QuadratureSelector::x(4);
    const auto pair = QuadratureSelector::x(5) + QuadratureSelector::x(6);
    for (double w : {0.0, 0.5, 2.0}) {
      const auto sm = spectral_matrix(lin, w);
      const double s_tt = output_spectrum(lin, x4, x4, sm);
      const double s_cc = output_spectrum(lin, pair, pair, sm);
      const double s_tc = output_spectrum(lin, x4, pair, sm);
      const double g_star = s_tc / s_cc;
      const double best = s_tt - s_tc * s_tc / s_cc;
      for (double g : {0.9 * g_star, 1.1 * g_star}) {
        const double detuned = s_tt - 2.0 * g * s_tc + g * g * s_cc;
        CHECK(detuned >= best - 1e-12);
      }
    }
  }
}

TEST_CASE("inference guards against a vanishing conditioning spectrum") {
  const auto p = bench(450.0);
  const auto lin = build_linearized(p, steady_state(p));
  const auto sm = spectral_matrix(lin, 0.0);
  QuadratureSelector null_sel;  // zero coefficients
  CHECK_THROWS_AS(inferred_spectrum(lin, QuadratureSelector::x(4), null_sel, sm), Error);
  try {
    inferred_spectrum(lin, QuadratureSelector::x(4), null_sel, sm);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateInference);
  }
}

TEST_CASE("criteria spectra are even in frequency") {
  for (double pump : {450.0, 550.0}) {
    const auto p = bench(pump);
    const auto lin = build_linearized(p, steady_state(p));
    for (double w : {0.1, 0.9, 2.7, 5.5}) {
      CHECK(std::abs(vlf_spectrum(lin, 4, 5, w) - vlf_spectrum(lin, 4, 5, -w)) < 1e-10);
      CHECK(std::abs(epr_joint_inference(lin, 5, +1, w) -
                     epr_joint_inference(lin, 5, +1, -w)) < 1e-10);
      CHECK(std::abs(epr_single_inference(lin, 6, +1, w) -
                     epr_single_inference(lin, 6, +1, -w)) < 1e-10);
    }
  }
}

TEST_CASE("the three pair spectra agree under symmetric driving") {
  for (double pump : {450.0, 550.0}) {
    const auto p = bench(pump);
    const auto lin = build_linearized(p, steady_state(p));
    for (double w : {0.0, 1.3, 4.0}) {
      const auto sm = spectral_matrix(lin, w);
      const double a = vlf_spectrum(lin, 4, 5, sm);
      const double b = vlf_spectrum(lin, 4, 6, sm);
      const double c = vlf_spectrum(lin, 5, 6, sm);
      CHECK(std::abs(a - b) < 1e-10);
      CHECK(std::abs(a - c) < 1e-10);
    }
  }
}

TEST_CASE("closed forms are invariant under the coupling rescale") {
  test::ParamGen gen(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const bool above = trial % 2 == 0;
    const auto p = gen.draw(above ? 1.05 : 0.1, above ? 2.5 : 0.95);
    const double s = std::exp(gen.uni(-1.5, 1.5));
    SystemParams q = p;
    for (auto& x : q.chi) x *= s;
    for (auto& e : q.pump) e /= s;
    const double w = gen.uni(0.0, 5.0) * p.kappa;
    CHECK(analytic_vlf(q, q.pump[0], w) ==
          doctest::Approx(analytic_vlf(p, p.pump[0], w)).epsilon(1e-12));
  }
}

TEST_CASE("full report flags violations on both branches") {
  std::vector<double> grid;
  for (double w = -2.0; w <= 2.0 + 1e-12; w += 0.25) grid.push_back(w);

  const auto rep_b = full_report(bench(), 450.0, grid);
  const auto rep_a = full_report(bench(), 550.0, grid);
  const std::size_t mid = grid.size() / 2;  // omega = 0
  for (int c = 0; c < 3; ++c) {
    CHECK(rep_b.i_out_violated[c][mid]);
    CHECK(rep_a.i_out_violated[c][mid]);
    CHECK(rep_b.epr_joint_violated[c][mid]);
    CHECK(rep_b.epr_single_violated[c][mid]);
    CHECK(rep_a.epr_joint_violated[c][mid]);
    CHECK(rep_a.epr_single_violated[c][mid]);
  }
  CHECK(rep_b.genuine_tripartite[mid]);
  CHECK(rep_a.genuine_tripartite[mid]);
  CHECK(rep_b.max_analytic_residual < 1e-8);
  CHECK(rep_a.max_analytic_residual < 1e-8);

  const auto rep_0 = full_report(bench(), 0.0, grid);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK_FALSE(rep_0.i_out_violated[c][i]);
      CHECK_FALSE(rep_0.epr_joint_violated[c][i]);
      CHECK_FALSE(rep_0.epr_single_violated[c][i]);
    }
  }
}
