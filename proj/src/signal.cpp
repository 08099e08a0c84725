#include "phsensor/signal.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "phsensor/errors.hpp"
#include "phsensor/optimize.hpp"
#include "phsensor/qcore.hpp"

namespace phs::signal {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kHalfTol = 1e-10;      // |S - 1/2| target for width bisection
constexpr double kAmplitudeFloor = 1e-150;

struct Core {
  double e_lambda;
  double deff;
  double d;    // deff^2
  double c2;   // cos^2(phi)
  double s2;   // sin^2(phi)
  double phi;
};

Core evaluate(const dilation::SensorConfig& cfg, double lambda, double t) {
  const auto s = dilation::effective_spec(cfg, lambda);
  Core core;
  core.e_lambda = s.e_lambda;
  core.deff = dilation::effective_delta(cfg, lambda);
  core.d = core.deff * core.deff;
  core.phi = s.e_lambda * t;
  const double c = std::cos(core.phi);
  const double sn = std::sin(core.phi);
  core.c2 = c * c;
  core.s2 = sn * sn;
  return core;
}

double signal_from(const Core& core) {
  if (core.d == 0.0) return 1.0;  // flat line; the isolated 0/0 limit is 1
  const double den = core.c2 + core.d * core.s2;
  if (core.c2 == 0.0) return 0.0;
  return core.c2 / den;
}

double gamma_from(const Core& core, double kappa) {
  return (core.c2 + core.d * core.s2) / (1.0 + kappa * kappa);
}

double dip_time(const dilation::EffectiveSpec& s, int j) {
  return (j - 0.5) * std::numbers::pi / s.e_lambda;
}

double dip_width(const dilation::SensorConfig& cfg, double lambda) {
  const auto s = dilation::effective_spec(cfg, lambda);
  return 2.0 * std::abs(dilation::effective_delta(cfg, lambda)) / s.e_lambda;
}

}  // namespace

SignalPoint signal_exact(const dilation::SensorConfig& cfg, double lambda, double t) {
  const Core core = evaluate(cfg, lambda, t);
  return {lambda, t, signal_from(core), gamma_from(core, cfg.kappa), core.phi};
}

SignalPoint signal_simulated(const dilation::SensorConfig& cfg, double lambda, double t) {
  const double grid[1] = {t};
  return simulated_sweep(cfg, lambda, grid).front();
}

std::vector<SignalPoint> simulated_sweep(const dilation::SensorConfig& cfg,
                                         double lambda,
                                         std::span<const double> t_grid) {
  const auto model = dilation::build_dilated(cfg, lambda);
  const auto eigs = qcore::eig_hermitian(model.hamiltonian);
  std::vector<SignalPoint> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    if (!std::isfinite(t)) throw std::invalid_argument("time grid entry is not finite");
    const auto psi = qcore::propagate(eigs, model.initial_state, t);
    const auto kept = qcore::postselect_ancilla0(psi);
    const double a0 = std::abs(kept.sensor[0]);
    const double a1 = std::abs(kept.sensor[1]);
    if (a0 < kAmplitudeFloor && a1 < kAmplitudeFloor)
      throw DegenerateSignalError("postselected amplitudes vanished at t = " + std::to_string(t));
    const double n0 = std::norm(kept.sensor[0]);
    const double n1 = std::norm(kept.sensor[1]);
    out.push_back({lambda, t, n0 / (n0 + n1), kept.probability,
                   model.effective.e_lambda * t});
  }
  return out;
}

double success_probability(const dilation::SensorConfig& cfg, double lambda, double t) {
  const Core core = evaluate(cfg, lambda, t);
  return gamma_from(core, cfg.kappa);
}

std::vector<DipDescriptor> dip_profile(const dilation::SensorConfig& cfg,
                                       double lambda, int j_max) {
  if (j_max < 1) throw std::invalid_argument("dip count must be at least 1");
  const auto s = dilation::effective_spec(cfg, lambda);
  const double deff = dilation::effective_delta(cfg, lambda);
  if (deff == 0.0)
    throw NoDipError("signal is identically 1 at lambda = " + std::to_string(lambda));
  std::vector<DipDescriptor> dips;
  dips.reserve(static_cast<std::size_t>(j_max));
  const double width = 2.0 * std::abs(deff) / s.e_lambda;
  for (int j = 1; j <= j_max; ++j) dips.push_back({j, dip_time(s, j), width});
  return dips;
}

DipSensitivities dip_parameter_sensitivities(const dilation::SensorConfig& cfg,
                                             double lambda) {
  const auto s = dilation::effective_spec(cfg, lambda);
  const double deff = dilation::effective_delta(cfg, lambda);
  if (deff == 0.0)
    throw NoDipError("signal is identically 1 at lambda = " + std::to_string(lambda));
  const double h = 1e-6 * cfg.epsilon * cfg.omega;
  if (lambda + h == lambda)
    throw std::invalid_argument("finite-difference step underflows at this lambda");
  const auto t1 = [&cfg](double lam) {
    const auto sp = dilation::effective_spec(cfg, lam);
    return dip_time(sp, 1);
  };
  const auto wid = [&cfg](double lam) { return dip_width(cfg, lam); };
  const double width = 2.0 * std::abs(deff) / s.e_lambda;
  DipSensitivities out;
  out.shift_rate = (t1(lambda + h) - t1(lambda - h)) / (2.0 * h) / width;
  out.narrowing_rate = (wid(lambda + h) - wid(lambda - h)) / (2.0 * h) / width;
  return out;
}

double signal_approx(const dilation::SensorConfig& cfg, double lambda, ApproxForm form) {
  const double x = lambda / (cfg.epsilon * cfg.omega);
  if (std::abs(x + 2.0) > 2.0)
    throw std::domain_error("approximation is restricted to |lambda/(eps omega) + 2| <= 2");
  const double alpha = (form == ApproxForm::primary) ? x * x / 8.0 - x
                                                     : -(x + x * x / 8.0);
  const double num = std::numbers::pi * std::numbers::pi * alpha * alpha * cfg.epsilon;
  const double off = x + 2.0;
  return num / (num + off * off);
}

PeakDescriptor peak_width(const dilation::SensorConfig& cfg) {
  const double lambda_m = -2.0 * cfg.epsilon * cfg.omega;
  const auto half = [&cfg](double lam) {
    return signal_exact(cfg, lam, cfg.tau).S - 0.5;
  };
  // The signal rises from ~0 at the metric pole -2 b0, reaches 1 at lambda_m
  // and falls back to ~0 at lambda = 0, so each side brackets one half-height
  // crossing.
  const double right = opt::bisect(half, lambda_m, 0.0, kHalfTol);
  const double left = opt::bisect(half, -2.0 * cfg.b0, lambda_m, kHalfTol);
  PeakDescriptor out;
  out.lambda_m = lambda_m;
  out.delta_lambda_plus = right - lambda_m;
  out.delta_lambda_minus = lambda_m - left;
  out.delta_lambda = out.delta_lambda_plus + out.delta_lambda_minus;
  out.lambda_o = kNaN;
  out.chi_max = kNaN;
  return out;
}

double susceptibility(const dilation::SensorConfig& cfg, double lambda, double t,
                      ChiMode mode) {
  if (mode == ChiMode::finite_difference) {
    const double h = std::max(1e-9, 1e-6 * cfg.epsilon * cfg.omega);
    if (lambda + h == lambda)
      throw std::invalid_argument("finite-difference step underflows at this lambda");
    return (signal_exact(cfg, lambda + h, t).S - signal_exact(cfg, lambda - h, t).S) /
           (2.0 * h);
  }
  const auto s = dilation::effective_spec(cfg, lambda);
  const double deff = dilation::effective_delta(cfg, lambda);
  const double d = deff * deff;
  const double phi = s.e_lambda * t;
  const double c = std::cos(phi);
  const double sn = std::sin(phi);
  const double c2 = c * c;
  const double s2 = sn * sn;
  const double phi_prime = t * s.b_lambda / s.e_lambda;
  // d(deff)/dlambda for deff = (b_lambda - kappa c) / E_lambda.
  const double e2 = s.e_lambda * s.e_lambda;
  const double deff_prime =
      (e2 - (s.b_lambda - cfg.kappa * cfg.coupling) * s.b_lambda) /
      (e2 * s.e_lambda);
  const double d_prime = 2.0 * deff * deff_prime;
  const double num = d * std::sin(2.0 * phi) * phi_prime + d_prime * s2 * c2;
  if (num == 0.0) return 0.0;
  const double den = c2 + d * s2;
  return -num / (den * den);
}

PeakDescriptor optimal_working_point(const dilation::SensorConfig& cfg, Branch branch) {
  const double lambda_m = -2.0 * cfg.epsilon * cfg.omega;
  const auto magnitude = [&cfg](double lam) {
    return std::abs(susceptibility(cfg, lam, cfg.tau));
  };
  // |chi| vanishes at the peak center and at both flanking signal zeros, with
  // a single interior maximum on each side.
  const double lo = (branch == Branch::above_peak) ? lambda_m : -2.0 * cfg.b0;
  const double hi = (branch == Branch::above_peak) ? 0.0 : lambda_m;
  const auto best = opt::golden_max(magnitude, lo, hi,
                                    1e-12 * cfg.epsilon * cfg.omega);
  PeakDescriptor out;
  out.lambda_m = lambda_m;
  out.delta_lambda_plus = kNaN;
  out.delta_lambda_minus = kNaN;
  out.delta_lambda = kNaN;
  out.lambda_o = best.x;
  out.chi_max = susceptibility(cfg, best.x, cfg.tau);
  return out;
}

}  // namespace phs::signal
