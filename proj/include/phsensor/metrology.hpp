#pragma once

#include "phsensor/dilation.hpp"
#include "phsensor/qcore.hpp"

namespace phs::metrology {

// (sqrt(S), -i sqrt(1 - S)); S must lie in [0, 1].
qcore::Vector<2> normalized_sensor_state(double S);

struct FisherReport {
  double lambda;
  double runs;   // attempted repetitions N
  double S;      // signal at (lambda, tau)
  double gamma;  // postselection success probability
  double chi;    // dS/dlambda
  double info;   // postselected Fisher information, gamma N chi^2 / (S (1 - S))
  double bound;  // unconditioned-phase reference, 4 N tau^2
};

// Fisher information of the binary postselected readout at t = tau.
FisherReport fisher_info(const dilation::SensorConfig& cfg, double lambda,
                         double runs);

// Reference interferometry fringe d = (1 + cos(2 lambda tau)) / 2 and its
// lambda-derivative.
double ramsey_signal(double lambda, double tau);
double ramsey_slope(double lambda, double tau);

struct SensitivityReport {
  double delta_S;              // readout noise on S
  double delta_d;              // readout noise on d
  double delta_lambda_sensor;  // delta_S / |chi|_max at the working point
  double delta_lambda_ramsey;  // delta_d / tau
  double ratio;                // sensor / reference
};

// Smallest resolvable lambda shift for both protocols at their best
// operating points.
SensitivityReport sensitivity(const dilation::SensorConfig& cfg, double delta_S,
                              double delta_d);

}  // namespace phs::metrology
