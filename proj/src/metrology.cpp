#include "phsensor/metrology.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "phsensor/errors.hpp"
#include "phsensor/signal.hpp"

namespace phs::metrology {

qcore::Vector<2> normalized_sensor_state(double S) {
  if (!(S >= 0.0 && S <= 1.0))
    throw std::invalid_argument("population must lie in [0, 1]");
  qcore::Vector<2> psi;
  psi[0] = qcore::cx{std::sqrt(S), 0.0};
  psi[1] = qcore::cx{0.0, -std::sqrt(1.0 - S)};
  return psi;
}

FisherReport fisher_info(const dilation::SensorConfig& cfg, double lambda,
                         double runs) {
  if (!(runs >= 1.0))
    throw std::invalid_argument("run count must be at least 1");
  const auto point = signal::signal_exact(cfg, lambda, cfg.tau);
  if (point.S <= 0.0 || point.S >= 1.0)
    throw DegenerateSignalError("binary readout carries no information at S = " +
                                std::to_string(point.S));
  const double chi = signal::susceptibility(cfg, lambda, cfg.tau);
  FisherReport rep;
  rep.lambda = lambda;
  rep.runs = runs;
  rep.S = point.S;
  rep.gamma = point.gamma;
  rep.chi = chi;
  rep.info = point.gamma * runs * chi * chi / (point.S * (1.0 - point.S));
  rep.bound = 4.0 * runs * cfg.tau * cfg.tau;
  return rep;
}

double ramsey_signal(double lambda, double tau) {
  return 0.5 * (1.0 + std::cos(2.0 * lambda * tau));
}

double ramsey_slope(double lambda, double tau) {
  return -tau * std::sin(2.0 * lambda * tau);
}

SensitivityReport sensitivity(const dilation::SensorConfig& cfg, double delta_S,
                              double delta_d) {
  if (!(delta_S > 0.0) || !(delta_d > 0.0))
    throw std::invalid_argument("noise levels must be positive");
  const auto wp = signal::optimal_working_point(cfg);
  SensitivityReport rep;
  rep.delta_S = delta_S;
  rep.delta_d = delta_d;
  rep.delta_lambda_sensor = delta_S / std::abs(wp.chi_max);
  rep.delta_lambda_ramsey = delta_d / cfg.tau;
  rep.ratio = rep.delta_lambda_sensor / rep.delta_lambda_ramsey;
  return rep;
}

}  // namespace phs::metrology
