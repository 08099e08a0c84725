#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "phsensor/dilation.hpp"
#include "phsensor/errors.hpp"
#include "phsensor/metrology.hpp"
#include "phsensor/optimize.hpp"

namespace dl = phs::dilation;
namespace mt = phs::metrology;

namespace {
const dl::SensorConfig kCfg = dl::derive_config(1.0, 0.01);
constexpr double kLambdaO = -0.017256977615177;
}  // namespace

TEST_CASE("normalized sensor state carries the population split") {
  const auto psi = mt::normalized_sensor_state(0.703);
  CHECK(psi[0].real() == doctest::Approx(std::sqrt(0.703)).epsilon(1e-15));
  CHECK(psi[0].imag() == 0.0);
  CHECK(psi[1].real() == 0.0);
  CHECK(psi[1].imag() == doctest::Approx(-std::sqrt(0.297)).epsilon(1e-15));
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-15));

  const auto bright = mt::normalized_sensor_state(1.0);
  CHECK(bright[0] == phs::qcore::cx{1.0, 0.0});
  CHECK(bright[1] == phs::qcore::cx{0.0, 0.0});
  const auto dark = mt::normalized_sensor_state(0.0);
  CHECK(dark[0] == phs::qcore::cx{0.0, 0.0});
  CHECK(dark[1] == phs::qcore::cx{0.0, -1.0});

  CHECK_THROWS_AS(mt::normalized_sensor_state(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(mt::normalized_sensor_state(1.1), std::invalid_argument);
}

TEST_CASE("fisher information at the working point matches frozen references") {
  const auto rep = mt::fisher_info(kCfg, kLambdaO, 1e6);
  CHECK(rep.S == doctest::Approx(0.69601027297534696).epsilon(1e-10));
  CHECK(rep.gamma == doctest::Approx(6.2287120786630062e-4).epsilon(1e-10));
  CHECK(rep.chi == doctest::Approx(-171.84331109423).epsilon(1e-9));
  CHECK(rep.info == doctest::Approx(86933859.9682073).epsilon(1e-9));
  CHECK(rep.bound == doctest::Approx(244297138.640826).epsilon(1e-12));
  CHECK(rep.info / rep.bound == doctest::Approx(0.355852960259).epsilon(1e-9));
  CHECK(rep.info * kCfg.epsilon / rep.runs ==
        doctest::Approx(0.869338599682).epsilon(1e-9));
}

TEST_CASE("postselected information never beats the reference bound") {
  for (double lam : phs::opt::linspace(-0.0199, -0.0001, 50)) {
    const auto rep = mt::fisher_info(kCfg, lam, 1e4);
    CHECK(rep.info <= rep.bound * (1.0 + 1e-12));
    CHECK(rep.info >= 0.0);
  }
}

TEST_CASE("fisher information transforms covariantly under frequency rescaling") {
  const double a = 10.0;
  const auto scaled = dl::derive_config(a, 0.01);
  const auto base = mt::fisher_info(kCfg, kLambdaO, 1e6);
  const auto high = mt::fisher_info(scaled, a * kLambdaO, 1e6);
  CHECK(high.info == doctest::Approx(base.info / (a * a)).epsilon(1e-10));
  CHECK(high.bound == doctest::Approx(base.bound / (a * a)).epsilon(1e-12));
  CHECK(high.S == doctest::Approx(base.S).epsilon(1e-12));
}

TEST_CASE("degenerate populations and bad run counts are rejected") {
  CHECK_THROWS_AS(mt::fisher_info(kCfg, -0.02, 1e6), phs::DegenerateSignalError);
  CHECK_THROWS_AS(mt::fisher_info(kCfg, kLambdaO, 0.5), std::invalid_argument);
}

TEST_CASE("reference fringe and slope") {
  const double quarter = std::numbers::pi / (4.0 * kCfg.tau);
  CHECK(mt::ramsey_signal(quarter, kCfg.tau) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mt::ramsey_signal(0.001, kCfg.tau) ==
        doctest::Approx(0.99993892695868575).epsilon(1e-14));
  CHECK(mt::ramsey_slope(0.001, kCfg.tau) ==
        doctest::Approx(-0.12214359595683316).epsilon(1e-13));
  CHECK(std::abs(mt::ramsey_slope(quarter, kCfg.tau)) ==
        doctest::Approx(kCfg.tau).epsilon(1e-12));
  CHECK(mt::ramsey_signal(0.0, kCfg.tau) == 1.0);
  for (double lam : phs::opt::linspace(-0.3, 0.3, 31))
    CHECK(std::abs(mt::ramsey_slope(lam, kCfg.tau)) <= kCfg.tau * (1.0 + 1e-15));
}

TEST_CASE("sensitivity comparison matches frozen references") {
  const auto rep = mt::sensitivity(kCfg, 0.01, 0.01);
  CHECK(rep.delta_S == 0.01);
  CHECK(rep.delta_d == 0.01);
  CHECK(rep.delta_lambda_sensor == doctest::Approx(5.819254725e-5).epsilon(1e-7));
  CHECK(rep.delta_lambda_ramsey == doctest::Approx(1.279589906e-3).epsilon(1e-10));
  CHECK(rep.ratio == doctest::Approx(0.04547749789).epsilon(1e-7));

  CHECK(mt::sensitivity(dl::derive_config(1.0, 0.04), 0.01, 0.01).ratio ==
        doctest::Approx(0.1377999259).epsilon(1e-7));
  CHECK(mt::sensitivity(dl::derive_config(1.0, 0.0025), 0.01, 0.01).ratio ==
        doctest::Approx(0.01285407763).epsilon(1e-7));
}

TEST_CASE("sensitivity ratio scales almost linearly in epsilon") {
  const std::array<double, 3> eps = {0.0025, 0.01, 0.04};
  std::array<double, 3> ratio{};
  for (std::size_t i = 0; i < eps.size(); ++i)
    ratio[i] = mt::sensitivity(dl::derive_config(1.0, eps[i]), 0.01, 0.01).ratio;
  const double slope = phs::opt::loglog_slope(eps, ratio);
  CHECK(slope == doctest::Approx(0.855463).epsilon(5e-4));
  CHECK(slope > 0.8);
  CHECK(slope < 1.2);
}

TEST_CASE("sensitivity rejects nonpositive noise levels") {
  CHECK_THROWS_AS(mt::sensitivity(kCfg, 0.0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(mt::sensitivity(kCfg, 0.01, -1.0), std::invalid_argument);
}
