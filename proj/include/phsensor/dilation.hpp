#pragma once

#include <span>

#include "phsensor/qcore.hpp"

namespace phs::dilation {

// Drive/coupling constants of the two-qubit realization, derived from
// (omega, epsilon) with the reduction gauge kappa (default: delta).
struct SensorConfig {
  double omega;     // angular-frequency scale, > 0
  double epsilon;   // coalescence parameter, > 0
  double kappa;     // ancilla preparation weight, > 0
  double delta;     // sqrt(epsilon / (1 + epsilon))
  double energy;    // E = 2 omega sqrt(epsilon (1 + epsilon))
  double b0;        // drive offset 4 omega epsilon (1 + epsilon) / (1 + 2 epsilon)
  double coupling;  // ancilla-sensor coupling c = E / (1 + 2 epsilon); b0^2 + c^2 = E^2
  double tau;       // readout time pi / (2 E)
  double theta;     // ancilla preparation angle 2 asin(kappa / sqrt(1 + kappa^2))
};

SensorConfig derive_config(double omega, double epsilon);
SensorConfig derive_config(double omega, double epsilon, double kappa);

// Perturbation-dependent parameters of the reduced two-level flow.
struct EffectiveSpec {
  double lambda;
  double b_lambda;      // b0 + lambda
  double e_lambda;      // sqrt(b_lambda^2 + coupling^2)
  double delta_lambda;  // (lambda + 2 epsilon omega) / e_lambda
  double d_lambda;      // delta_lambda^2
};

EffectiveSpec effective_spec(const SensorConfig& cfg, double lambda);

// Gauge-general asymmetry (b_lambda - kappa c) / e_lambda.  At the default
// gauge kappa = delta this equals delta_lambda algebraically; the
// delta_lambda form is used there because its numerator cancels exactly in
// floating point at lambda = -2 epsilon omega.
double effective_delta(const SensorConfig& cfg, double lambda);

// Non-Hermitian two-level generator E * [[0, 1/delta], [delta, 0]].
qcore::Matrix<2> pseudo_hamiltonian(double energy, double delta);

struct MetricOperator {
  double zeta0;  // kappa
  double zeta1;  // (c + kappa b_lambda) / (b_lambda - kappa c)

  qcore::Matrix<2> matrix() const {
    qcore::Matrix<2> z;
    z(0, 0) = qcore::cx{zeta0, 0.0};
    z(1, 1) = qcore::cx{zeta1, 0.0};
    return z;
  }
};

// Raw entries without the positivity guard (the quasi-Hermiticity residual
// only involves squared entries, so it is checkable on either side of the
// sign flip).  Throws SingularMetricError near b_lambda = kappa c.
MetricOperator metric_entries(const SensorConfig& cfg, double lambda);

// Validated metric: additionally rejects non-positive entries.
MetricOperator metric_operator(const SensorConfig& cfg, double lambda);

struct DilatedModel {
  qcore::Hermitian<4> hamiltonian;   // b_lambda (I x sx) - c (sy x sy)
  qcore::Vector<4> initial_state;    // (|0>a + kappa |1>a) (x) |0>s, normalized
  SensorConfig config;
  EffectiveSpec effective;
};

DilatedModel build_dilated(const SensorConfig& cfg, double lambda);

// Cross-validates the two evolution paths over a time grid: the 4x4 unitary
// flow followed by ancilla-|0> postselection against the closed-form
// two-level solution (cos(Et), -i delta_eff sin(Et)) / sqrt(1 + kappa^2).
// Also checks the ancilla-|1> branch against zeta * psi(t) wherever the
// metric is regular.  Returns the largest relative deviation observed.
double verify_dilation(const SensorConfig& cfg, double lambda,
                       std::span<const double> t_grid);

}  // namespace phs::dilation
