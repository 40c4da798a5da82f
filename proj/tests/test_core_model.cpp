#include <doctest.h>

#include <cmath>
#include <complex>

#include "test_support.hpp"
#include "triopo/sde.hpp"
#include "triopo/steady_state.hpp"

using namespace triopo;
using triopo::test::bench;

TEST_CASE("validate accepts the benchmark configuration") {
  CHECK(validate(bench(450.0)).empty());
}

TEST_CASE("validate rejects non-positive rates and negative pumps") {
  auto p = bench(450.0);
  p.chi[0] = 0.0;
  auto errs = validate(p);
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].find("chi") != std::string::npos);

  p = bench(450.0);
  p.gamma = -1.0;
  errs = validate(p);
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].find("gamma") != std::string::npos);

  p = bench(450.0);
  p.kappa = 0.0;
  CHECK(validate(p).size() == 1);

  p = bench(450.0);
  p.pump[2] = -1.0;
  errs = validate(p);
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].find("pump") != std::string::npos);

  p = bench(450.0);
  p.chi[1] = 0.0;
  p.gamma = -2.0;
  CHECK(validate(p).size() == 2);
}

TEST_CASE("threshold pump strength") {
  CHECK(threshold_pump(bench()) == doctest::Approx(500.0).epsilon(1e-12));

  SystemParams p;
  p.chi = {0.5, 0.5, 0.5};
  p.gamma = 1.0;
  p.kappa = 1.0;
  CHECK(threshold_pump(p) == doctest::Approx(1.0).epsilon(1e-12));

  p = bench();
  p.kappa = 2.0;
  CHECK(threshold_pump(p) == doctest::Approx(1000.0).epsilon(1e-12));

  p = bench();
  p.chi[2] = 0.02;
  CHECK_THROWS_AS(threshold_pump(p), Error);
}

TEST_CASE("steady state below threshold") {
  const auto ss = steady_state(bench(450.0));
  CHECK(ss.branch == Branch::BelowThreshold);
  CHECK(ss.pump_ratio == doctest::Approx(0.9).epsilon(1e-12));
  for (int m = 1; m <= 3; ++m) {
    CHECK(ss.amp(m).real() == doctest::Approx(45.0).epsilon(1e-12));
    CHECK(ss.amp(m).imag() == 0.0);
  }
  for (int m = 4; m <= 6; ++m) {
    CHECK(ss.amp(m) == cd{});
    CHECK(ss.amp(m, 1) == cd{});
  }
}

TEST_CASE("steady state above threshold") {
  const auto ss = steady_state(bench(550.0));
  CHECK(ss.branch == Branch::AboveThreshold);
  const double beta = std::sqrt(5000.0);
  for (int m = 1; m <= 3; ++m)
    CHECK(ss.amp(m).real() == doctest::Approx(50.0).epsilon(1e-12));
  for (int m = 4; m <= 6; ++m) {
    CHECK(ss.amp(m).real() == doctest::Approx(beta).epsilon(1e-12));
    CHECK(ss.amp(m).real() == doctest::Approx(70.710678118654755).epsilon(1e-9));
  }
  // conjugate pairing
  for (int m = 1; m <= 6; ++m) CHECK(ss.amp(m, 1) == std::conj(ss.amp(m)));
}

TEST_CASE("steady state with no drive is the empty cavity") {
  const auto ss = steady_state(bench(0.0));
  CHECK(ss.branch == Branch::BelowThreshold);
  for (const auto& a : ss.alpha) CHECK(a == cd{});
}

TEST_CASE("threshold guard band") {
  CHECK_THROWS_AS(steady_state(bench(500.0)), Error);
  try {
    steady_state(bench(500.0));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AtThreshold);
  }
  CHECK_THROWS_AS(steady_state(bench(500.0 * (1.0 + 1e-9))), Error);
  // configurable guard admits drives closer to threshold
  CHECK_NOTHROW(steady_state(bench(500.0 * (1.0 + 1e-9)), 1e-12));
}

TEST_CASE("asymmetric pumps or couplings are rejected") {
  auto p = bench(450.0);
  p.pump[1] = 451.0;
  CHECK_THROWS_AS(steady_state(p), Error);
  try {
    steady_state(p);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AsymmetricPumps);
  }
  p = bench(450.0);
  p.chi[0] = 0.02;
  CHECK_THROWS_AS(steady_state(p), Error);
}

TEST_CASE("intensity ratio of bright beams") {
  CHECK(intensity_ratio(steady_state(bench(550.0))) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(intensity_ratio(steady_state(bench(750.0))) == doctest::Approx(10.0).epsilon(1e-12));

  // signal intensity vanishes approaching threshold from above
  const auto near = steady_state(bench(500.0 * (1.0 + 1e-9)), 1e-12);
  CHECK(intensity_ratio(near) < 1e-7);

  CHECK_THROWS_AS(intensity_ratio(steady_state(bench(450.0))), Error);
  try {
    intensity_ratio(steady_state(bench(450.0)));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongBranch);
  }
}

TEST_CASE("steady states are fixed points of the deterministic flow") {
  test::ParamGen gen(991);
  for (int trial = 0; trial < 60; ++trial) {
    const bool above = trial % 2 == 0;
    const auto p = gen.draw(above ? 1.05 : 0.05, above ? 3.0 : 0.95);
    const auto ss = steady_state(p);
    PhaseSpacePoint pt;
    pt.z = ss.alpha;
    const auto f = drift(p, pt);
    double residual = 0.0, scale = 0.0;
    for (const auto& v : f) residual = std::max(residual, std::abs(v));
    for (const auto& a : ss.alpha) scale = std::max(scale, std::abs(a));
    CHECK(residual < 1e-12 * std::max(p.gamma, p.kappa) * scale);
  }
}

TEST_CASE("branches join continuously at threshold") {
  test::ParamGen gen(417);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = gen.draw(0.5, 0.5);
    const double e_th = threshold_pump(p);
    const double eps = 1e-9;
    p.pump = {e_th * (1.0 - eps), e_th * (1.0 - eps), e_th * (1.0 - eps)};
    const auto below = steady_state(p, 1e-12);
    p.pump = {e_th * (1.0 + eps), e_th * (1.0 + eps), e_th * (1.0 + eps)};
    const auto above = steady_state(p, 1e-12);
    const double clamp = p.kappa / (2.0 * p.chi[0]);
    for (int m = 1; m <= 3; ++m) {
      CHECK(std::abs(below.amp(m) - above.amp(m)) <= 4.0 * eps * clamp);
      CHECK(above.amp(m).real() == doctest::Approx(clamp).epsilon(1e-12));
    }
    for (int m = 4; m <= 6; ++m)
      CHECK(std::abs(above.amp(m)) <= std::sqrt(2.0 * e_th * eps / p.chi[0]));
  }
}

TEST_CASE("amplitudes follow the coupling rescale rule") {
  // chi -> s*chi with E -> E/s keeps E/E_th fixed and scales every amplitude
  // by 1/s, so all coupling products chi*alpha are invariant.
  test::ParamGen gen(62);
  for (int trial = 0; trial < 40; ++trial) {
    const bool above = trial % 2 == 0;
    const auto p = gen.draw(above ? 1.05 : 0.05, above ? 3.0 : 0.95);
    const double s = std::exp(gen.uni(-2.0, 2.0));
    SystemParams q = p;
    for (auto& x : q.chi) x *= s;
    for (auto& e : q.pump) e /= s;
    const auto ss_p = steady_state(p);
    const auto ss_q = steady_state(q);
    CHECK(ss_q.pump_ratio == doctest::Approx(ss_p.pump_ratio).epsilon(1e-12));
    for (int i = 0; i < 12; ++i) {
      CHECK(ss_q.alpha[i].real() == doctest::Approx(ss_p.alpha[i].real() / s).epsilon(1e-12));
      CHECK(ss_q.alpha[i].imag() == 0.0);
    }
  }
}
