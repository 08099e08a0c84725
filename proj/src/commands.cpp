#include "phsensor/commands.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "phsensor/dilation.hpp"
#include "phsensor/errors.hpp"
#include "phsensor/metrology.hpp"
#include "phsensor/optimize.hpp"
#include "phsensor/qcore.hpp"
#include "phsensor/signal.hpp"
#include "phsensor/version.hpp"

namespace phs::commands {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double parse_number(const std::string& text) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
    ++pos;
  if (pos != text.size())
    throw std::invalid_argument("not a number: '" + text + "'");
  if (!std::isfinite(value))
    throw std::invalid_argument("grid values must be finite: '" + text + "'");
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto end = text.find(sep, start);
    parts.push_back(text.substr(start, end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return parts;
}

dilation::SensorConfig resolve_config(double omega, double epsilon,
                                      const std::optional<double>& kappa) {
  return kappa ? dilation::derive_config(omega, epsilon, *kappa)
               : dilation::derive_config(omega, epsilon);
}

std::string join_grid(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += table::format_double(values[i]);
  }
  return out;
}

void echo_header(table::Table& t, const std::string& command) {
  t.add_meta("name", std::string(kProjectName));
  t.add_meta("version", std::string(kVersion));
  t.add_meta("command", command);
}

void echo_config(table::Table& t, const dilation::SensorConfig& cfg) {
  t.add_meta("omega", cfg.omega);
  t.add_meta("epsilon", cfg.epsilon);
  t.add_meta("kappa", cfg.kappa);
  t.add_meta("tau", cfg.tau);
}

void echo_preset(table::Table& t, const Preset& preset) {
  t.add_meta("preset", preset.name);
  t.add_meta("preset_j_over_2pi_khz", preset.j_over_2pi_khz);
  t.add_meta("preset_b_max_over_2pi_khz", preset.b_max_over_2pi_khz);
  t.add_meta("preset_tau_us", preset.tau_us);
  t.add_meta("preset_provenance", preset.provenance);
}

// Peak-to-tail default: zero field plus seven offsets stepping off the peak
// center in units of eps*omega.
std::vector<double> default_lambdas(const dilation::SensorConfig& cfg) {
  std::vector<double> lams{0.0};
  for (int k = 0; k < 7; ++k) {
    const double x = 0.072 + 0.1 * k;
    lams.push_back((x - 2.0) * cfg.epsilon * cfg.omega);
  }
  return lams;
}

std::string protocol_name(noisemc::Protocol p) {
  return p == noisemc::Protocol::pseudo_hermitian ? "pseudo_hermitian" : "ramsey";
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  if (spec.empty()) throw std::invalid_argument("empty grid specification");
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3)
      throw std::invalid_argument("uniform grid must be start:stop:count: '" +
                                  spec + "'");
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double count = parse_number(parts[2]);
    if (!(count >= 1.0) || count != std::floor(count) || count > 1e7)
      throw std::invalid_argument("grid count must be a positive integer: '" +
                                  spec + "'");
    return opt::linspace(lo, hi, static_cast<std::size_t>(count));
  }
  std::vector<double> values;
  for (const auto& part : split(spec, ',')) values.push_back(parse_number(part));
  return values;
}

const Preset& ytterbium_ion() {
  static const Preset preset{
      "ytterbium-ion", 10.0, 1.0, 25.0,
      "trapped-ion hyperfine qubit; exchange J/2pi = 10 kHz, bias below "
      "1 kHz, interrogation time 25 us"};
  return preset;
}

table::Table cmd_signal(const SignalParams& p) {
  const auto cfg = resolve_config(p.omega, p.epsilon, p.kappa);
  const auto lambdas =
      p.lambda_spec.empty() ? default_lambdas(cfg) : parse_grid(p.lambda_spec);
  const auto ts = p.t_spec.empty() ? opt::linspace(0.0, 20.0, 401)
                                   : parse_grid(p.t_spec);
  if (lambdas.empty() || ts.empty())
    throw std::invalid_argument("signal needs nonempty lambda and t grids");

  table::Table t;
  echo_header(t, "signal");
  echo_config(t, cfg);
  t.add_meta("lambda_grid", join_grid(lambdas));
  t.add_meta("t_grid", p.t_spec.empty() ? "0:20:401" : p.t_spec);
  if (p.preset) echo_preset(t, *p.preset);

  t.columns = {"lambda", "lambda_over_eps_omega", "t", "omega_t",
               "S_exact", "S_simulated", "gamma", "phi"};
  if (p.preset) {
    t.columns.push_back("t_us");
    t.columns.push_back("lambda_over_2pi_khz");
  }

  const double eps_omega = cfg.epsilon * cfg.omega;
  for (double lam : lambdas) {
    const auto sim = signal::simulated_sweep(cfg, lam, ts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const auto ex = signal::signal_exact(cfg, lam, ts[i]);
      std::vector<table::Cell> row{lam,       lam / eps_omega, ts[i],
                                   cfg.omega * ts[i], ex.S,    sim[i].S,
                                   ex.gamma,  ex.phi};
      if (p.preset) {
        row.emplace_back(ts[i] * p.preset->tau_us / cfg.tau);
        row.emplace_back(lam * p.preset->j_over_2pi_khz / cfg.energy);
      }
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

table::Table cmd_peak(const PeakParams& p) {
  const auto eps_list =
      p.eps_spec.empty() ? std::vector<double>{0.01, 0.003, 0.001}
                         : parse_grid(p.eps_spec);
  if (eps_list.empty()) throw std::invalid_argument("peak needs an epsilon list");

  table::Table t;
  echo_header(t, "peak");
  t.add_meta("omega", p.omega);
  t.add_meta("epsilon_grid", join_grid(eps_list));
  if (p.kappa) t.add_meta("kappa", *p.kappa);
  t.columns = {"epsilon", "tau", "lambda_m", "delta_lambda_plus",
               "delta_lambda_minus", "delta_lambda", "fit", "ratio"};

  for (double eps : eps_list) {
    const auto cfg = resolve_config(p.omega, eps, p.kappa);
    const auto peak = signal::peak_width(cfg);
    const double fit = 3.0 * std::numbers::pi * std::pow(eps, 1.5) * p.omega;
    t.rows.push_back({eps, cfg.tau, peak.lambda_m, peak.delta_lambda_plus,
                      peak.delta_lambda_minus, peak.delta_lambda, fit,
                      peak.delta_lambda / fit});
  }
  return t;
}

table::Table cmd_susceptibility(const SusceptibilityParams& p) {
  const auto eps_list =
      p.eps_spec.empty() ? std::vector<double>{0.01, 0.001, 0.0001}
                         : parse_grid(p.eps_spec);
  if (eps_list.empty())
    throw std::invalid_argument("susceptibility needs an epsilon list");
  if (p.sweep_points < 2)
    throw std::invalid_argument("sweep needs at least 2 points");

  table::Table t;
  echo_header(t, "susceptibility");
  t.add_meta("omega", p.omega);
  t.add_meta("epsilon_grid", join_grid(eps_list));
  if (p.kappa) t.add_meta("kappa", *p.kappa);
  t.add_meta("sweep_points", static_cast<std::uint64_t>(p.sweep_points));

  std::vector<double> chis;
  std::vector<signal::PeakDescriptor> points;
  for (double eps : eps_list) {
    const auto cfg = resolve_config(p.omega, eps, p.kappa);
    points.push_back(signal::optimal_working_point(cfg));
    chis.push_back(points.back().chi_max);
  }
  if (eps_list.size() >= 2)
    t.add_meta("scaling_slope", opt::loglog_slope(eps_list, chis));

  t.columns = {"epsilon", "tau", "lambda", "lambda_over_eps_omega", "S_exact",
               "chi", "chi_fd", "lambda_o", "chi_max", "chi_prefactor",
               "working_point_ratio"};
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const double eps = eps_list[i];
    const auto cfg = resolve_config(p.omega, eps, p.kappa);
    const auto& wp = points[i];
    const double e32 = std::pow(eps, 1.5);
    const double prefactor = std::abs(wp.chi_max) * e32 * p.omega;
    const double wp_ratio = (wp.lambda_o / p.omega + 2.0 * eps) / e32;
    const double eo = eps * p.omega;
    for (double lam : opt::linspace(-3.2 * eo, -0.1 * eo, p.sweep_points)) {
      t.rows.push_back({eps, cfg.tau, lam, lam / eo,
                        signal::signal_exact(cfg, lam, cfg.tau).S,
                        signal::susceptibility(cfg, lam, cfg.tau),
                        signal::susceptibility(cfg, lam, cfg.tau,
                                               signal::ChiMode::finite_difference),
                        wp.lambda_o, wp.chi_max, prefactor, wp_ratio});
    }
  }
  return t;
}

table::Table cmd_fisher(const FisherParams& p) {
  const auto cfg = resolve_config(p.omega, p.epsilon, p.kappa);
  std::vector<double> lambdas;
  if (p.lambda_spec.empty())
    lambdas.push_back(signal::optimal_working_point(cfg).lambda_o);
  else
    lambdas = parse_grid(p.lambda_spec);
  if (lambdas.empty()) throw std::invalid_argument("fisher needs a lambda list");

  table::Table t;
  echo_header(t, "fisher");
  echo_config(t, cfg);
  t.add_meta("runs", p.runs);
  t.add_meta("lambda_grid", join_grid(lambdas));
  t.columns = {"lambda", "S", "gamma", "chi", "info", "bound",
               "info_over_bound", "info_scaled"};
  for (double lam : lambdas) {
    const auto rep = metrology::fisher_info(cfg, lam, p.runs);
    t.rows.push_back({rep.lambda, rep.S, rep.gamma, rep.chi, rep.info, rep.bound,
                      rep.info / rep.bound,
                      rep.info * cfg.epsilon * cfg.omega * cfg.omega / rep.runs});
  }
  return t;
}

table::Table cmd_montecarlo(const MonteCarloParams& p) {
  const auto cfg = resolve_config(p.omega, p.epsilon, p.kappa);

  table::Table t;
  echo_header(t, "montecarlo");
  echo_config(t, cfg);
  t.add_meta("m0", p.readout.m0);
  t.add_meta("m1", p.readout.m1);
  t.add_meta("sigma", p.readout.sigma);
  t.add_meta("xi", p.readout.xi);
  t.add_meta("correlation",
             p.readout.correlation == noisemc::Correlation::fully_correlated
                 ? "fully_correlated"
                 : "uncorrelated");
  t.columns = {"protocol", "N", "R", "seed", "S_hat_mean", "S_hat_var",
               "predicted_var", "delta_lambda_min", "lambda", "S_true",
               "gamma", "kept_mean", "status"};

  std::vector<noisemc::Protocol> protocols;
  if (p.compare)
    protocols = {noisemc::Protocol::pseudo_hermitian, noisemc::Protocol::ramsey};
  else
    protocols = {p.campaign.protocol};

  std::vector<double> min_shift(protocols.size(), kNaN);
  for (std::size_t i = 0; i < protocols.size(); ++i) {
    const auto proto = protocols[i];
    double lam;
    double slope;
    if (proto == noisemc::Protocol::pseudo_hermitian) {
      lam = p.lambda ? *p.lambda : signal::optimal_working_point(cfg).lambda_o;
      slope = std::abs(signal::susceptibility(cfg, lam, cfg.tau));
    } else {
      lam = p.lambda ? *p.lambda : std::numbers::pi / (4.0 * cfg.tau);
      slope = std::abs(metrology::ramsey_slope(lam, cfg.tau));
    }
    auto campaign = p.campaign;
    campaign.protocol = proto;
    try {
      const auto res = noisemc::simulate_campaign(cfg, lam, p.readout, campaign);
      min_shift[i] = std::sqrt(res.s_hat_var) / slope;
      t.rows.push_back({protocol_name(proto), campaign.runs,
                        static_cast<std::uint64_t>(campaign.repetitions),
                        campaign.seed, res.s_hat_mean, res.s_hat_var,
                        res.predicted_var, min_shift[i], lam, res.s_true,
                        res.gamma, res.kept_mean, std::string("ok")});
    } catch (const InsufficientStatisticsError&) {
      t.rows.push_back({protocol_name(proto), campaign.runs,
                        static_cast<std::uint64_t>(campaign.repetitions),
                        campaign.seed, kNaN, kNaN, kNaN, kNaN, lam, kNaN, kNaN,
                        kNaN, std::string("insufficient_statistics")});
    }
  }
  if (p.compare && std::isfinite(min_shift[0]) && std::isfinite(min_shift[1]))
    t.add_meta("delta_lambda_ratio", min_shift[0] / min_shift[1]);
  return t;
}

namespace {

struct CheckLine {
  std::string name;
  double deviation;
  double tolerance;
  bool pass() const { return deviation <= tolerance; }
};

std::string format_check(const CheckLine& line) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-22s %s  max deviation %.3e  (tolerance %.0e)\n",
                line.name.c_str(), line.pass() ? "PASS" : "FAIL", line.deviation,
                line.tolerance);
  return buf;
}

}  // namespace

VerifyReport cmd_verify(const VerifyParams& p) {
  auto cfg = resolve_config(p.omega, p.epsilon, p.kappa);
  cfg.coupling *= p.coupling_scale;

  const double eps_omega = cfg.epsilon * cfg.omega;
  const double lambda_m = -2.0 * eps_omega;
  const double lambda_o = signal::optimal_working_point(cfg).lambda_o;
  const std::vector<double> lambdas{0.0, lambda_m, lambda_o, eps_omega,
                                    -eps_omega};
  const auto ts = opt::linspace(0.0, 2.0 * cfg.tau, 50);
  const double k2 = 1.0 + cfg.kappa * cfg.kappa;

  double dev_equiv = 0.0;
  double dev_norm = 0.0;
  double dev_gamma = 0.0;
  double dev_decomp = 0.0;
  for (double lam : lambdas) {
    dev_equiv = std::max(dev_equiv, dilation::verify_dilation(cfg, lam, ts));
    const auto model = dilation::build_dilated(cfg, lam);
    const auto eigs = qcore::eig_hermitian(model.hamiltonian);
    for (double t : ts) {
      const auto psi = qcore::propagate(eigs, model.initial_state, t);
      const auto kept = qcore::postselect_ancilla0(psi);
      const double n0 = std::norm(kept.sensor[0]);
      const double n1 = std::norm(kept.sensor[1]);
      const double discarded = std::norm(psi[2]) + std::norm(psi[3]);
      const auto ex = signal::signal_exact(cfg, lam, t);
      const double s_sim = (n0 + n1) > 0.0 ? n0 / (n0 + n1) : 0.0;
      dev_equiv = std::max(dev_equiv, std::abs(s_sim - ex.S));
      dev_gamma = std::max(dev_gamma, std::abs(kept.probability - ex.gamma));
      dev_norm = std::max(dev_norm, std::abs(kept.probability + discarded - 1.0));
      const double c = std::cos(ex.phi);
      dev_decomp =
          std::max(dev_decomp, std::abs(ex.S * ex.gamma * k2 - c * c));
    }
  }

  // Metric checks: the operator derived from the couplings has to stay
  // positive and render the configured two-level generator quasi-Hermitian;
  // the coupling itself has to match the configured energy split.
  double dev_metric = 0.0;
  const double e2 = cfg.energy * cfg.energy;
  dev_metric = std::max(dev_metric,
                        std::abs(cfg.b0 * cfg.b0 + cfg.coupling * cfg.coupling - e2) / e2);
  dev_metric = std::max(
      dev_metric,
      std::abs(cfg.coupling * (1.0 + 2.0 * cfg.epsilon) - cfg.energy) / cfg.energy);
  dev_metric = std::max(dev_metric,
                        std::abs(cfg.tau * cfg.energy - std::numbers::pi / 2.0) /
                            (std::numbers::pi / 2.0));
  if (cfg.kappa == cfg.delta) {
    dev_metric = std::max(dev_metric,
                          std::abs(cfg.coupling + cfg.kappa * cfg.b0 - cfg.energy) /
                              cfg.energy);
    dev_metric = std::max(dev_metric,
                          std::abs(cfg.b0 - cfg.kappa * cfg.coupling - 2.0 * eps_omega) /
                              (2.0 * eps_omega));
  }
  const double lambda_pole = cfg.kappa * cfg.coupling - cfg.b0;
  for (double lam : opt::linspace(lambda_pole + 0.1 * eps_omega,
                                  lambda_pole + 4.0 * eps_omega, 41)) {
    try {
      const auto zeta = dilation::metric_operator(cfg, lam);
      const double b = cfg.b0 + lam;
      // Spectral radius implied by the configured energy rather than by the
      // couplings; any mismatch breaks quasi-Hermiticity.
      const double e_cfg = std::sqrt(b * b + e2 - cfg.b0 * cfg.b0);
      const double deff = (b - cfg.kappa * cfg.coupling) / e_cfg;
      const auto h = dilation::pseudo_hamiltonian(e_cfg, deff);
      const double eta0 = 1.0 + zeta.zeta0 * zeta.zeta0;
      const double eta1 = 1.0 + zeta.zeta1 * zeta.zeta1;
      const double residual =
          std::abs(eta0 * h(0, 1) - std::conj(h(1, 0)) * eta1) /
          (std::max(eta0, eta1) * e_cfg);
      dev_metric = std::max(dev_metric, residual);
    } catch (const std::exception&) {
      dev_metric = std::max(dev_metric, 1.0);
    }
  }

  const CheckLine checks[] = {
      {"naimark_equivalence", dev_equiv, 1e-9},
      {"metric_condition", dev_metric, 1e-10},
      {"norm_bookkeeping", dev_norm, 1e-10},
      {"gamma_agreement", dev_gamma, 1e-9},
      {"gamma_decomposition", dev_decomp, 1e-12},
  };

  VerifyReport report;
  char head[200];
  std::snprintf(head, sizeof(head),
                "%s %s verify: omega=%.17g epsilon=%.17g kappa=%.17g"
                " coupling_scale=%.17g\n",
                kProjectName, kVersion, cfg.omega, cfg.epsilon, cfg.kappa,
                p.coupling_scale);
  report.text = head;
  report.passed = true;
  for (const auto& check : checks) {
    report.text += format_check(check);
    report.passed = report.passed && check.pass();
  }
  report.text += report.passed ? "result: PASS\n" : "result: FAIL\n";
  return report;
}

}  // namespace phs::commands
