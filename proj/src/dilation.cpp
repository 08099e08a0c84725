#include "phsensor/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "phsensor/errors.hpp"

namespace phs::dilation {

namespace {

// Relative threshold below which b_lambda - kappa c counts as singular.
constexpr double kMetricSingularRel = 1e-12;

double metric_denominator(const SensorConfig& cfg, const EffectiveSpec& s) {
  return s.b_lambda - cfg.kappa * cfg.coupling;
}

bool metric_regular(const SensorConfig& cfg, const EffectiveSpec& s) {
  const double den = metric_denominator(cfg, s);
  const double scale = std::abs(s.b_lambda) + cfg.kappa * cfg.coupling;
  return std::abs(den) > kMetricSingularRel * scale;
}

}  // namespace

SensorConfig derive_config(double omega, double epsilon) {
  if (!(omega > 0.0) || !(epsilon > 0.0))
    throw std::invalid_argument("derive_config: omega and epsilon must be positive");
  return derive_config(omega, epsilon, std::sqrt(epsilon / (1.0 + epsilon)));
}

SensorConfig derive_config(double omega, double epsilon, double kappa) {
  if (!(omega > 0.0) || !(epsilon > 0.0) || !(kappa > 0.0))
    throw std::invalid_argument(
        "derive_config: omega, epsilon and kappa must be positive");
  SensorConfig c{};
  c.omega = omega;
  c.epsilon = epsilon;
  c.kappa = kappa;
  c.delta = std::sqrt(epsilon / (1.0 + epsilon));
  c.energy = 2.0 * omega * std::sqrt(epsilon * (1.0 + epsilon));
  c.b0 = 4.0 * omega * epsilon * (1.0 + epsilon) / (1.0 + 2.0 * epsilon);
  c.coupling = c.energy / (1.0 + 2.0 * epsilon);
  c.tau = std::numbers::pi / (2.0 * c.energy);
  c.theta = 2.0 * std::asin(kappa / std::sqrt(1.0 + kappa * kappa));
  return c;
}

EffectiveSpec effective_spec(const SensorConfig& cfg, double lambda) {
  EffectiveSpec s{};
  s.lambda = lambda;
  s.b_lambda = cfg.b0 + lambda;
  s.e_lambda = std::hypot(s.b_lambda, cfg.coupling);
  s.delta_lambda = (lambda + 2.0 * cfg.epsilon * cfg.omega) / s.e_lambda;
  s.d_lambda = s.delta_lambda * s.delta_lambda;
  return s;
}

double effective_delta(const SensorConfig& cfg, double lambda) {
  const EffectiveSpec s = effective_spec(cfg, lambda);
  // Exact compare is intentional: derive_config(omega, epsilon) stores
  // kappa = delta bit-for-bit, and at that gauge the (lambda + 2 eps omega)
  // numerator is the exactly-cancelling form.
  if (cfg.kappa == cfg.delta) return s.delta_lambda;
  return metric_denominator(cfg, s) / s.e_lambda;
}

qcore::Matrix<2> pseudo_hamiltonian(double energy, double delta) {
  if (delta == 0.0)
    throw SingularParameterError(
        "pseudo_hamiltonian: delta = 0 has no finite matrix form");
  qcore::Matrix<2> h;
  h(0, 1) = qcore::cx{energy / delta, 0.0};
  h(1, 0) = qcore::cx{energy * delta, 0.0};
  return h;
}

MetricOperator metric_entries(const SensorConfig& cfg, double lambda) {
  const EffectiveSpec s = effective_spec(cfg, lambda);
  if (!metric_regular(cfg, s))
    throw SingularMetricError("metric_entries: b_lambda = kappa c at lambda = " +
                              std::to_string(lambda));
  const double den = metric_denominator(cfg, s);
  return MetricOperator{cfg.kappa,
                        (cfg.coupling + cfg.kappa * s.b_lambda) / den};
}

MetricOperator metric_operator(const SensorConfig& cfg, double lambda) {
  const MetricOperator z = metric_entries(cfg, lambda);
  if (!(z.zeta0 > 0.0) || !(z.zeta1 > 0.0))
    throw MetricPositivityError("metric_operator: non-positive entry at lambda = " +
                                std::to_string(lambda));
  return z;
}

DilatedModel build_dilated(const SensorConfig& cfg, double lambda) {
  const EffectiveSpec s = effective_spec(cfg, lambda);

  const qcore::Matrix<4> drive = tensor(qcore::Matrix<2>::identity(), qcore::pauli_x());
  const qcore::Matrix<4> exchange = tensor(qcore::pauli_y(), qcore::pauli_y());
  const qcore::Matrix<4> h = s.b_lambda * drive - cfg.coupling * exchange;

  const double root = std::sqrt(1.0 + cfg.kappa * cfg.kappa);
  qcore::Vector<4> psi0;
  psi0[0] = qcore::cx{1.0 / root, 0.0};
  psi0[2] = qcore::cx{cfg.kappa / root, 0.0};

  return DilatedModel{qcore::Hermitian<4>(h), psi0, cfg, s};
}

double verify_dilation(const SensorConfig& cfg, double lambda,
                       std::span<const double> t_grid) {
  if (t_grid.empty())
    throw std::invalid_argument("verify_dilation: time grid is empty");
  for (double t : t_grid)
    if (!std::isfinite(t))
      throw std::invalid_argument("verify_dilation: non-finite time point");

  const DilatedModel model = build_dilated(cfg, lambda);
  const auto es = qcore::eig_hermitian(model.hamiltonian);
  const double deff = effective_delta(cfg, lambda);
  const double elam = model.effective.e_lambda;
  const double root = std::sqrt(1.0 + cfg.kappa * cfg.kappa);

  const bool zeta_ok = metric_regular(cfg, model.effective);
  double zeta1 = 0.0;
  if (zeta_ok)
    zeta1 = (cfg.coupling + cfg.kappa * model.effective.b_lambda) /
            metric_denominator(cfg, model.effective);

  double worst = 0.0;
  for (double t : t_grid) {
    const auto full = qcore::propagate(es, model.initial_state, t);
    const double phi = elam * t;
    const qcore::cx a0{std::cos(phi) / root, 0.0};
    const qcore::cx a1{0.0, -deff * std::sin(phi) / root};

    // Kept branch against the closed-form two-level solution.
    const double dev0 = std::hypot(std::abs(full[0] - a0), std::abs(full[1] - a1));
    const double ref0 = std::max(std::hypot(std::abs(a0), std::abs(a1)), 1e-12);
    worst = std::max(worst, dev0 / ref0);

    // Discarded branch against zeta * psi(t), where zeta exists.
    if (zeta_ok) {
      const qcore::cx b0 = cfg.kappa * a0;
      const qcore::cx b1 = zeta1 * a1;
      const double dev1 = std::hypot(std::abs(full[2] - b0), std::abs(full[3] - b1));
      const double ref1 = std::max(std::hypot(std::abs(b0), std::abs(b1)), 1e-12);
      worst = std::max(worst, dev1 / ref1);
    }
  }
  return worst;
}

}  // namespace phs::dilation
