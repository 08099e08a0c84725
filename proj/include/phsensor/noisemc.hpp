#pragma once

#include <cstdint>

#include "phsensor/dilation.hpp"
#include "phsensor/metrology.hpp"

namespace phs::noisemc {

enum class Correlation { uncorrelated, fully_correlated };

struct ReadoutModel {
  double m0 = 100.0;  // mean counts for the bright sensor state
  double m1 = 0.0;    // mean counts for the dark sensor state
  double sigma = 0.0; // per-run Gaussian count noise
  double xi = 0.0;    // background drift amplitude
  Correlation correlation = Correlation::fully_correlated;

  double contrast() const { return m0 - m1; }
};

enum class Protocol { pseudo_hermitian, ramsey };

struct Campaign {
  std::uint64_t runs = 1;   // attempted runs N per repetition
  int repetitions = 2;      // independent repetitions R
  std::uint64_t seed = 0;
  Protocol protocol = Protocol::pseudo_hermitian;
  unsigned threads = 0;     // 0: hardware concurrency
};

struct CampaignResult {
  double s_hat_mean;    // mean of the R per-repetition estimates
  double s_hat_var;     // unbiased variance of the estimates
  double kept_mean;     // mean number of postselected runs per repetition
  double predicted_var; // closed-form model prediction
  double s_true;        // exact signal (or fringe) at the evaluated point
  double gamma;         // postselection success probability (1 for ramsey)
};

// Closed-form estimator variance:
// s(1-s)/(gamma N) + sigma^2/(gamma N m^2) + xi^2/m^2 (shared drift)
// or xi^2/(gamma N m^2) (independent drift).
double variance_model(double s, double gamma, const ReadoutModel& readout,
                      double runs);

// Simulates R independent repetitions of N runs each and aggregates the
// per-repetition estimates. Identical results for any thread count.
CampaignResult simulate_campaign(const dilation::SensorConfig& cfg, double lambda,
                                 const ReadoutModel& readout,
                                 const Campaign& campaign);

// Smallest resolvable lambda shift from simulated noise levels, comparing the
// postselected protocol at its optimal working point against the reference
// fringe at quarter period.
metrology::SensitivityReport min_detectable(const dilation::SensorConfig& cfg,
                                            const ReadoutModel& readout,
                                            const Campaign& campaign);

}  // namespace phs::noisemc
