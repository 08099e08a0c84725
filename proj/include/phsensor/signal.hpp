#pragma once

#include <span>
#include <vector>

#include "phsensor/dilation.hpp"

namespace phs::signal {

struct SignalPoint {
  double lambda;
  double t;
  double S;      // normalized kept-branch population of |0>_s, in [0, 1]
  double gamma;  // postselection success probability, in [0, 1]
  double phi;    // accumulated phase E_lambda * t
};

// Closed-form signal, evaluated in the pole-free form
// S = cos^2(phi) / (cos^2(phi) + D sin^2(phi)).
SignalPoint signal_exact(const dilation::SensorConfig& cfg, double lambda, double t);

// Signal from the full two-qubit evolution plus postselection.
SignalPoint signal_simulated(const dilation::SensorConfig& cfg, double lambda, double t);

// As signal_simulated, diagonalizing the model only once for the whole grid.
std::vector<SignalPoint> simulated_sweep(const dilation::SensorConfig& cfg,
                                         double lambda,
                                         std::span<const double> t_grid);

// gamma = (cos^2(phi) + D sin^2(phi)) / (1 + kappa^2).
double success_probability(const dilation::SensorConfig& cfg, double lambda, double t);

struct DipDescriptor {
  int j;
  double t_center;  // (j - 1/2) pi / E_lambda
  double width;     // full width at half depth, 2 sqrt(D) / E_lambda
};

std::vector<DipDescriptor> dip_profile(const dilation::SensorConfig& cfg,
                                       double lambda, int j_max);

struct DipSensitivities {
  double shift_rate;      // d t_1 / d lambda, in units of the dip width
  double narrowing_rate;  // d width / d lambda, in units of the dip width
};

// Central finite differences of the dip center and width.
DipSensitivities dip_parameter_sensitivities(const dilation::SensorConfig& cfg,
                                             double lambda);

// Small-|x + 2| closed forms, x = lambda / (eps omega):
//   primary: alpha = x^2/8 - x
//   variant: alpha = -(x + x^2/8)
// Both give S = pi^2 alpha^2 eps / (pi^2 alpha^2 eps + (x + 2)^2).
enum class ApproxForm { primary, variant };

double signal_approx(const dilation::SensorConfig& cfg, double lambda,
                     ApproxForm form = ApproxForm::primary);

struct PeakDescriptor {
  double lambda_m;            // peak center, -2 eps omega
  double delta_lambda_plus;   // right half-width at S = 1/2
  double delta_lambda_minus;  // left half-width at S = 1/2
  double delta_lambda;        // full width, sum of the half-widths
  double lambda_o;            // maximal-|chi| working point
  double chi_max;             // signed susceptibility at lambda_o
};

// Fills the width fields by bisection on S(., tau) = 1/2; the working-point
// fields stay NaN.
PeakDescriptor peak_width(const dilation::SensorConfig& cfg);

enum class ChiMode { analytic, finite_difference };

// dS/dlambda at fixed t.
double susceptibility(const dilation::SensorConfig& cfg, double lambda, double t,
                      ChiMode mode = ChiMode::analytic);

enum class Branch { above_peak, below_peak };

// Fills lambda_m, lambda_o and chi_max by golden-section search of |chi| at
// t = tau; the width fields stay NaN.
PeakDescriptor optimal_working_point(const dilation::SensorConfig& cfg,
                                     Branch branch = Branch::above_peak);

}  // namespace phs::signal
