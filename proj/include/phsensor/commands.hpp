#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "phsensor/noisemc.hpp"
#include "phsensor/table.hpp"

namespace phs::commands {

// Grid syntax shared by all commands: "start:stop:count" for a uniform grid
// or a comma-separated value list.
std::vector<double> parse_grid(const std::string& spec);

// Laboratory-units preset mapping the dimensionless model onto an ion-trap
// realization (exchange coupling J identified with the level splitting).
struct Preset {
  std::string name;
  double j_over_2pi_khz;
  double b_max_over_2pi_khz;
  double tau_us;
  std::string provenance;
};

const Preset& ytterbium_ion();

struct SignalParams {
  double omega = 1.0;
  double epsilon = 0.01;
  std::optional<double> kappa;
  std::string lambda_spec;  // empty: peak-to-tail default set
  std::string t_spec;       // empty: "0:20:401"
  const Preset* preset = nullptr;
};
table::Table cmd_signal(const SignalParams& p);

struct PeakParams {
  double omega = 1.0;
  std::optional<double> kappa;
  std::string eps_spec;  // empty: "0.01,0.003,0.001"
};
table::Table cmd_peak(const PeakParams& p);

struct SusceptibilityParams {
  double omega = 1.0;
  std::optional<double> kappa;
  std::string eps_spec;  // empty: "0.01,0.001,0.0001"
  std::size_t sweep_points = 125;
};
// One row per (epsilon, lambda) sweep point; the per-epsilon working-point
// summary (lambda_o, chi_max, prefactor, ratio) repeats across each block.
table::Table cmd_susceptibility(const SusceptibilityParams& p);

struct FisherParams {
  double omega = 1.0;
  double epsilon = 0.01;
  std::optional<double> kappa;
  double runs = 1e6;
  std::string lambda_spec;  // empty: the optimal working point
};
table::Table cmd_fisher(const FisherParams& p);

struct MonteCarloParams {
  double omega = 1.0;
  double epsilon = 0.01;
  std::optional<double> kappa;
  noisemc::ReadoutModel readout;
  noisemc::Campaign campaign;
  std::optional<double> lambda;  // default: per-protocol best point
  bool compare = false;          // run both protocols and report the ratio
};
table::Table cmd_montecarlo(const MonteCarloParams& p);

struct VerifyParams {
  double omega = 1.0;
  double epsilon = 0.01;
  std::optional<double> kappa;
  double coupling_scale = 1.0;  // test hook: scales the derived coupling
};

struct VerifyReport {
  std::string text;
  bool passed;
};
VerifyReport cmd_verify(const VerifyParams& p);

}  // namespace phs::commands
