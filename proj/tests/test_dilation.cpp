#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "phsensor/dilation.hpp"
#include "phsensor/errors.hpp"
#include "phsensor/optimize.hpp"
#include "phsensor/qcore.hpp"
#include "phsensor/rng.hpp"

namespace dl = phs::dilation;
namespace qc = phs::qcore;
using qc::cx;

TEST_CASE("derived constants match frozen extended-precision references") {
  const auto cfg = dl::derive_config(1.0, 0.01);
  CHECK(cfg.delta == doctest::Approx(0.099503719020998914).epsilon(1e-14));
  CHECK(cfg.energy == doctest::Approx(0.20099751242241781).epsilon(1e-14));
  CHECK(cfg.b0 == doctest::Approx(0.039607843137254902).epsilon(1e-14));
  CHECK(cfg.coupling == doctest::Approx(0.19705638472786059).epsilon(1e-14));
  CHECK(cfg.tau == doctest::Approx(7.8150038170308290).epsilon(1e-14));
  CHECK(cfg.theta == doctest::Approx(0.19835452215880473).epsilon(1e-14));
  CHECK(cfg.kappa == cfg.delta);
}

TEST_CASE("derived constants satisfy the energy identity for random inputs") {
  auto g = phs::rng::derive_stream(2024, 10, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const double omega = 0.1 + 9.9 * g.uniform();
    const double eps = std::pow(10.0, -4.0 + 3.7 * g.uniform());
    const auto cfg = dl::derive_config(omega, eps);
    const double lhs = cfg.b0 * cfg.b0 + cfg.coupling * cfg.coupling;
    const double rhs = cfg.energy * cfg.energy;
    // 1e-14 covers the handful of rounding steps in each closed form.
    CHECK(std::abs(lhs - rhs) <= 1e-14 * rhs);
    CHECK(cfg.tau * cfg.energy == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-14));
  }
}

TEST_CASE("derived constants vanish smoothly in the hermitian limit") {
  const auto far = dl::derive_config(1.0, 1e-8);
  const auto close = dl::derive_config(1.0, 1e-12);
  CHECK(close.delta < far.delta);
  CHECK(close.energy < far.energy);
  CHECK(close.theta < far.theta);
  CHECK(close.delta < 2e-6);
  CHECK(close.energy < 3e-6);
  CHECK(close.theta < 3e-6);
}

TEST_CASE("config construction rejects nonpositive parameters") {
  CHECK_THROWS_AS(dl::derive_config(0.0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(dl::derive_config(1.0, -0.2), std::invalid_argument);
  CHECK_THROWS_AS(dl::derive_config(1.0, 0.01, 0.0), std::invalid_argument);
}

TEST_CASE("two-level generator family") {
  const auto h = dl::pseudo_hamiltonian(1.0, 1.0);
  CHECK(h.max_abs_diff(qc::pauli_x()) == 0.0);

  const double e = 0.20099751242241781;
  const double d = 0.099503719020998914;
  const auto hs = dl::pseudo_hamiltonian(e, d);
  // Squares to E^2 times the identity, so the eigenvalues are +-E.
  const auto sq = hs * hs;
  CHECK(sq(0, 0).real() == doctest::Approx(e * e).epsilon(1e-14));
  CHECK(sq(1, 1).real() == doctest::Approx(e * e).epsilon(1e-14));
  CHECK(std::abs(sq(0, 1)) == 0.0);
  CHECK(std::abs(sq(1, 0)) == 0.0);

  // Right eigenvectors (1, +-delta) close up as delta -> 0.
  auto angle = [](double dd) {
    const double overlap = (1.0 - dd * dd) / (1.0 + dd * dd);
    return std::acos(overlap);
  };
  CHECK(angle(1e-3) == doctest::Approx(2e-3).epsilon(0.05));
  CHECK(angle(1e-3) < angle(1e-2));
  CHECK(angle(1e-2) < angle(1e-1));

  CHECK_THROWS_AS(dl::pseudo_hamiltonian(1.0, 0.0), phs::SingularParameterError);
}

TEST_CASE("effective parameters at reference points") {
  const auto cfg = dl::derive_config(1.0, 0.01);

  const auto at0 = dl::effective_spec(cfg, 0.0);
  CHECK(at0.e_lambda == doctest::Approx(cfg.energy).epsilon(2e-15));
  CHECK(at0.delta_lambda == doctest::Approx(cfg.delta).epsilon(2e-15));

  const auto peak = dl::effective_spec(cfg, -0.02);
  CHECK(peak.delta_lambda == 0.0);
  CHECK(peak.d_lambda == 0.0);

  const auto probe = dl::effective_spec(cfg, -0.0173);
  CHECK(probe.e_lambda == doctest::Approx(0.198315048918).epsilon(1e-9));
  CHECK(probe.delta_lambda == doctest::Approx(0.0136147005219).epsilon(1e-9));
  CHECK(probe.d_lambda == doctest::Approx(probe.delta_lambda * probe.delta_lambda));

  // Gauge-general asymmetry coincides with delta_lambda at the default gauge.
  CHECK(dl::effective_delta(cfg, -0.0173) ==
        doctest::Approx(probe.delta_lambda).epsilon(1e-12));
}

TEST_CASE("metric entries at the default gauge") {
  const auto cfg = dl::derive_config(1.0, 0.01);

  const auto z0 = dl::metric_operator(cfg, 0.0);
  CHECK(z0.zeta0 == doctest::Approx(0.099503719020998914).epsilon(1e-12));
  CHECK(z0.zeta1 == doctest::Approx(10.049875621120890).epsilon(1e-12));

  CHECK(dl::metric_operator(cfg, 0.01).zeta1 ==
        doctest::Approx(6.733084987).epsilon(1e-9));
  CHECK(dl::metric_operator(cfg, -0.01).zeta1 ==
        doctest::Approx(20.00024752).epsilon(1e-9));
  CHECK(dl::metric_operator(cfg, 0.04).zeta1 ==
        doctest::Approx(3.416294353).epsilon(1e-9));
}

TEST_CASE("metric guards: singular gauge point and positivity loss") {
  const auto cfg = dl::derive_config(1.0, 0.01);

  // Gauge chosen to null the denominator b_lambda - kappa c.
  const double blam = cfg.b0 + 0.01;
  const auto singular = dl::derive_config(1.0, 0.01, blam / cfg.coupling);
  CHECK_THROWS_AS(dl::metric_entries(singular, 0.01), phs::SingularMetricError);
  CHECK_THROWS_AS(dl::metric_operator(singular, 0.01), phs::SingularMetricError);

  // Left of the signal peak the second entry flips sign.
  CHECK_THROWS_AS(dl::metric_operator(cfg, -0.03), phs::MetricPositivityError);
  CHECK(dl::metric_entries(cfg, -0.03).zeta1 ==
        doctest::Approx(-19.80124009).epsilon(1e-9));
}

TEST_CASE("quasi-hermiticity residual vanishes across the metric grid") {
  const auto cfg = dl::derive_config(1.0, 0.01);
  const double span = 4.0 * cfg.epsilon * cfg.omega;
  const auto grid = phs::opt::linspace(-span, span, 41);

  int singular_points = 0;
  for (double lam : grid) {
    dl::MetricOperator z{0.0, 0.0};
    try {
      z = dl::metric_entries(cfg, lam);
    } catch (const phs::SingularMetricError&) {
      ++singular_points;
      continue;
    }
    const auto s = dl::effective_spec(cfg, lam);
    const auto hs = dl::pseudo_hamiltonian(s.e_lambda, dl::effective_delta(cfg, lam));

    qc::Matrix<2> eta;  // zeta^2 + 1
    eta(0, 0) = cx{1.0 + z.zeta0 * z.zeta0, 0.0};
    eta(1, 1) = cx{1.0 + z.zeta1 * z.zeta1, 0.0};

    const auto lhs = eta * hs;
    const auto rhs = hs.adjoint() * eta;
    const double residual = lhs.max_abs_diff(rhs);
    double scale = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) scale = std::max(scale, std::abs(lhs(i, j)));
    CHECK(residual <= 1e-10 * scale);
  }
  CHECK(singular_points == 1);  // only the exact peak point lacks a metric
}

TEST_CASE("dilated model entries, preparation and bookkeeping") {
  const auto cfg = dl::derive_config(1.0, 0.01);
  const auto model = dl::build_dilated(cfg, 0.0);
  const auto& h = model.hamiltonian.matrix();

  CHECK(h(0, 1) == cx{cfg.b0, 0.0});
  CHECK(h(0, 3) == cx{cfg.coupling, 0.0});
  CHECK(h(1, 2) == cx{-cfg.coupling, 0.0});
  CHECK(h(2, 3) == cx{cfg.b0, 0.0});
  CHECK(std::abs(h.trace()) == 0.0);
  CHECK(h.hermiticity_defect() == 0.0);
  // Zeros everywhere off the drive/exchange pattern.
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(h(i, i)) == 0.0);
    for (std::size_t j = 0; j < 4; ++j) CHECK(h(i, j).imag() == 0.0);
  }
  CHECK(std::abs(h(0, 2)) == 0.0);
  CHECK(std::abs(h(1, 3)) == 0.0);

  CHECK(model.initial_state[0].real() ==
        doctest::Approx(0.9950859653474028).epsilon(1e-14));
  CHECK(model.initial_state[2].real() ==
        doctest::Approx(0.09901475429766743).epsilon(1e-14));
  CHECK(std::abs(model.initial_state[1]) == 0.0);
  CHECK(std::abs(model.initial_state[3]) == 0.0);
  CHECK(std::abs(model.initial_state.norm2() - 1.0) <= 1e-12);
  // Preparation angle consistency: amplitude ratio tan(theta/2) = kappa.
  CHECK(std::tan(cfg.theta / 2.0) == doctest::Approx(cfg.kappa).epsilon(1e-12));
}

TEST_CASE("postselected flow equals the closed-form two-level flow") {
  const auto cfg = dl::derive_config(1.0, 0.01);
  const auto grid = phs::opt::linspace(0.0, 2.0 * cfg.tau, 50);

  for (double lam : {0.0, -0.02, -0.01725697771, 0.01, -0.01})
    CHECK(dl::verify_dilation(cfg, lam, grid) <= 1e-9);

  // Single-point grid at t = 0 is exact up to the eigenbasis round trip.
  const std::vector<double> zero{0.0};
  CHECK(dl::verify_dilation(cfg, 0.0, zero) <= 1e-13);

  CHECK_THROWS_AS(dl::verify_dilation(cfg, 0.0, std::vector<double>{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      dl::verify_dilation(cfg, 0.0, std::vector<double>{std::nan("")}),
      std::invalid_argument);
}

TEST_CASE("coalescence point pins the sensor to its dark state") {
  const auto cfg = dl::derive_config(1.0, 0.01);
  const auto model = dl::build_dilated(cfg, -0.02);
  const auto es = qc::eig_hermitian(model.hamiltonian);
  for (double frac : {0.3, 1.0, 1.7}) {
    const auto full = qc::propagate(es, model.initial_state, frac * cfg.tau);
    CHECK(std::abs(full[1]) <= 1e-12);  // no weight ever reaches |0>a |1>s
  }
  const auto grid = phs::opt::linspace(0.0, 2.0 * cfg.tau, 50);
  CHECK(dl::verify_dilation(cfg, -0.02, grid) <= 1e-9);
}

TEST_CASE("general preparation weights verify numerically") {
  const auto cfg = dl::derive_config(1.0, 0.01, 0.3);
  const auto grid = phs::opt::linspace(0.0, 2.0 * cfg.tau, 30);
  for (double lam : {0.0, 0.005, -0.01})
    CHECK(dl::verify_dilation(cfg, lam, grid) <= 1e-9);

  // At the gauge-singular drive value the kept-branch check still runs.
  const double lam_singular = 0.3 * cfg.coupling - cfg.b0;
  CHECK(dl::verify_dilation(cfg, lam_singular, grid) <= 1e-9);
}

TEST_CASE("norm bookkeeping splits unity between the two branches") {
  for (double kappa : {0.099503719020998914, 0.3}) {
    const auto cfg = dl::derive_config(1.0, 0.01, kappa);
    for (double lam : {0.0, -0.01, 0.013}) {
      const auto z = dl::metric_entries(cfg, lam);
      const auto s = dl::effective_spec(cfg, lam);
      const double deff = dl::effective_delta(cfg, lam);
      for (double t : phs::opt::linspace(0.0, 2.0 * cfg.tau, 20)) {
        const double phi = s.e_lambda * t;
        const double root = std::sqrt(1.0 + kappa * kappa);
        const double c2 = std::cos(phi) * std::cos(phi);
        const double s2 = std::sin(phi) * std::sin(phi);
        const double kept = (c2 + deff * deff * s2) / (root * root);
        const double discarded =
            (z.zeta0 * z.zeta0 * c2 + z.zeta1 * z.zeta1 * deff * deff * s2) /
            (root * root);
        CHECK(kept + discarded == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("simulation reconstructs the effective spectrum") {
  const auto cfg = dl::derive_config(1.0, 0.01);
  const double lam = -0.0173;
  const auto model = dl::build_dilated(cfg, lam);
  const auto es = qc::eig_hermitian(model.hamiltonian);

  // |eigenvalues| of the dilated generator all equal E_lambda.
  for (double v : es.values)
    CHECK(std::abs(v) == doctest::Approx(0.198315048918).epsilon(1e-9));

  // Amplitude ratio at the quarter period recovers |delta_lambda|.
  const double tq = std::numbers::pi / (2.0 * model.effective.e_lambda);
  const auto full = qc::propagate(es, model.initial_state, tq);
  const double root = std::sqrt(1.0 + cfg.kappa * cfg.kappa);
  const double rebuilt = std::abs(full[1]) * root;
  CHECK(rebuilt == doctest::Approx(0.0136147005219).epsilon(1e-9));
}
