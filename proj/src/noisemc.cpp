#include "phsensor/noisemc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "phsensor/errors.hpp"
#include "phsensor/rng.hpp"
#include "phsensor/signal.hpp"

namespace phs::noisemc {

namespace {

struct RepOutcome {
  double estimate = 0.0;
  std::uint64_t kept = 0;
};

void check_readout(const ReadoutModel& rm) {
  if (!(rm.contrast() > 0.0))
    throw std::invalid_argument("readout contrast m0 - m1 must be positive");
  if (!(rm.sigma >= 0.0) || !(rm.xi >= 0.0))
    throw std::invalid_argument("noise amplitudes must be nonnegative");
}

// One repetition of the postselected protocol. Runs that fail postselection
// contribute nothing, so they are skipped in bulk: the gap to the next kept
// run is geometric with success probability gamma, sampled by inversion.
// Per-stream draw order: [shared drift], then per kept run a state uniform,
// a count Gaussian if sigma > 0 and a drift Gaussian if uncorrelated.
RepOutcome run_postselected(double S, double gamma, const ReadoutModel& rm,
                            std::uint64_t n, rng::Xoshiro256pp g) {
  RepOutcome out;
  if (!(gamma > 0.0)) return out;
  double shared = 0.0;
  if (rm.xi > 0.0 && rm.correlation == Correlation::fully_correlated)
    shared = rm.xi * g.gaussian();
  const double m = rm.contrast();
  const double log_q = std::log1p(-gamma);  // log(1 - gamma) <= 0
  double sum = 0.0;
  std::uint64_t used = 0;
  while (used < n) {
    const double u = g.uniform();
    if (u == 0.0) break;  // inversion maps u = 0 to a gap past the end
    const double gap = std::floor(std::log(u) / log_q) + 1.0;
    if (!(gap <= static_cast<double>(n - used))) break;
    used += static_cast<std::uint64_t>(gap);
    double count = (g.uniform() < S) ? rm.m0 : rm.m1;
    if (rm.sigma > 0.0) count += rm.sigma * g.gaussian();
    if (rm.xi > 0.0)
      count += (rm.correlation == Correlation::uncorrelated) ? rm.xi * g.gaussian()
                                                             : shared;
    sum += (count - rm.m1) / m;
    ++out.kept;
  }
  if (out.kept > 0) out.estimate = sum / static_cast<double>(out.kept);
  return out;
}

// One repetition of the reference fringe protocol; every run is kept. The
// additive Gaussian contributions enter the estimator only through their sum
// over the repetition, so each is drawn once at its aggregate width.
// Per-stream draw order: [shared drift], n state uniforms, [count-noise
// aggregate], [drift aggregate if uncorrelated].
RepOutcome run_reference(double d, const ReadoutModel& rm, std::uint64_t n,
                         rng::Xoshiro256pp g) {
  RepOutcome out;
  double shared = 0.0;
  if (rm.xi > 0.0 && rm.correlation == Correlation::fully_correlated)
    shared = rm.xi * g.gaussian();
  std::uint64_t bright = 0;
  for (std::uint64_t j = 0; j < n; ++j)
    if (g.uniform() < d) ++bright;
  const double nd = static_cast<double>(n);
  const double root_n = std::sqrt(nd);
  double noise = 0.0;
  if (rm.sigma > 0.0) noise += rm.sigma * root_n * g.gaussian();
  if (rm.xi > 0.0)
    noise += (rm.correlation == Correlation::uncorrelated)
                 ? rm.xi * root_n * g.gaussian()
                 : nd * shared;
  out.kept = n;
  out.estimate = (static_cast<double>(bright) + noise / rm.contrast()) / nd;
  return out;
}

}  // namespace

double variance_model(double s, double gamma, const ReadoutModel& readout,
                      double runs) {
  check_readout(readout);
  if (!(runs >= 1.0)) throw std::invalid_argument("run count must be at least 1");
  if (!(gamma > 0.0) || gamma > 1.0)
    throw std::invalid_argument("success probability must lie in (0, 1]");
  const double gn = gamma * runs;
  if (gn < 1.0)
    throw InsufficientStatisticsError(
        "expected kept runs gamma*N = " + std::to_string(gn) + " is below 1");
  const double m2 = readout.contrast() * readout.contrast();
  double var = s * (1.0 - s) / gn + readout.sigma * readout.sigma / (gn * m2);
  const double xi2 = readout.xi * readout.xi;
  var += (readout.correlation == Correlation::fully_correlated) ? xi2 / m2
                                                                : xi2 / (gn * m2);
  return var;
}

CampaignResult simulate_campaign(const dilation::SensorConfig& cfg, double lambda,
                                 const ReadoutModel& readout,
                                 const Campaign& campaign) {
  check_readout(readout);
  if (campaign.runs < 1) throw std::invalid_argument("need at least one run");
  if (campaign.repetitions < 2)
    throw std::invalid_argument("variance estimation needs at least 2 repetitions");

  double s_true;
  double gamma;
  if (campaign.protocol == Protocol::pseudo_hermitian) {
    const auto point = signal::signal_exact(cfg, lambda, cfg.tau);
    s_true = point.S;
    gamma = point.gamma;
  } else {
    s_true = metrology::ramsey_signal(lambda, cfg.tau);
    gamma = 1.0;
  }

  const auto rep_count = static_cast<std::size_t>(campaign.repetitions);
  std::vector<RepOutcome> reps(rep_count);
  const auto domain =
      static_cast<std::uint64_t>(campaign.protocol == Protocol::ramsey ? 1 : 0);
  const auto run_rep = [&](std::size_t r) {
    auto stream = rng::derive_stream(campaign.seed, domain,
                                     static_cast<std::uint64_t>(r));
    reps[r] = (campaign.protocol == Protocol::pseudo_hermitian)
                  ? run_postselected(s_true, gamma, readout, campaign.runs, stream)
                  : run_reference(s_true, readout, campaign.runs, stream);
  };

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  unsigned workers = campaign.threads ? campaign.threads : hw;
  workers = std::min<unsigned>(workers, static_cast<unsigned>(rep_count));
  workers = std::max(1u, workers);
  if (workers == 1) {
    for (std::size_t r = 0; r < rep_count; ++r) run_rep(r);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t r = w; r < rep_count; r += workers) run_rep(r);
      });
    for (auto& th : pool) th.join();
  }

  for (std::size_t r = 0; r < rep_count; ++r)
    if (reps[r].kept == 0)
      throw InsufficientStatisticsError("repetition " + std::to_string(r) +
                                        " kept zero runs");

  // Fixed-order reduction keeps the result independent of the thread count.
  double mean = 0.0;
  double kept_mean = 0.0;
  for (const auto& rep : reps) {
    mean += rep.estimate;
    kept_mean += static_cast<double>(rep.kept);
  }
  mean /= static_cast<double>(rep_count);
  kept_mean /= static_cast<double>(rep_count);
  double var = 0.0;
  for (const auto& rep : reps) {
    const double dev = rep.estimate - mean;
    var += dev * dev;
  }
  var /= static_cast<double>(rep_count - 1);

  CampaignResult result;
  result.s_hat_mean = mean;
  result.s_hat_var = var;
  result.kept_mean = kept_mean;
  result.predicted_var =
      variance_model(s_true, gamma, readout, static_cast<double>(campaign.runs));
  result.s_true = s_true;
  result.gamma = gamma;
  return result;
}

metrology::SensitivityReport min_detectable(const dilation::SensorConfig& cfg,
                                            const ReadoutModel& readout,
                                            const Campaign& campaign) {
  const auto wp = signal::optimal_working_point(cfg);

  Campaign sensor = campaign;
  sensor.protocol = Protocol::pseudo_hermitian;
  const auto rs = simulate_campaign(cfg, wp.lambda_o, readout, sensor);

  Campaign reference = campaign;
  reference.protocol = Protocol::ramsey;
  const double lambda_r = std::numbers::pi / (4.0 * cfg.tau);
  const auto rr = simulate_campaign(cfg, lambda_r, readout, reference);

  metrology::SensitivityReport rep;
  rep.delta_S = std::sqrt(rs.s_hat_var);
  rep.delta_d = std::sqrt(rr.s_hat_var);
  rep.delta_lambda_sensor = rep.delta_S / std::abs(wp.chi_max);
  rep.delta_lambda_ramsey = rep.delta_d / cfg.tau;
  rep.ratio = rep.delta_lambda_sensor / rep.delta_lambda_ramsey;
  return rep;
}

}  // namespace phs::noisemc
