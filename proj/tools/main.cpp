#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "phsensor/commands.hpp"
#include "phsensor/noisemc.hpp"
#include "phsensor/table.hpp"
#include "phsensor/version.hpp"

namespace {

struct OutputOptions {
  std::string format = "csv";
  std::string out;
};

void add_output_options(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out, "Write the table to PATH instead of stdout");
}

std::string config_placeholder;

void add_config_option(CLI::App* cmd) {
  // Help text only; the file is expanded into option tokens before parsing.
  cmd->add_option("--config", config_placeholder,
                  "Read option defaults from a `key = value` file "
                  "(explicit flags win)");
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> read_config_tokens(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read config file: " + path);
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = path + ":" + std::to_string(lineno);
    if (eq == std::string::npos)
      throw std::invalid_argument(where + ": expected `key = value`");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument(where + ": expected `key = value`");
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

// Splices `--key=value` tokens from any --config files in between the
// subcommand name and the explicit flags; with last-wins option policy this
// yields the precedence flags > config > defaults.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::size_t sub = 0;
  while (sub < args.size() && !args[sub].empty() && args[sub][0] == '-') ++sub;
  if (sub == args.size()) return args;

  std::vector<std::string> config_tokens;
  std::vector<std::string> rest;
  for (std::size_t i = sub + 1; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 == args.size())
        throw std::invalid_argument("--config needs a file path");
      const auto file = read_config_tokens(args[++i]);
      config_tokens.insert(config_tokens.end(), file.begin(), file.end());
    } else if (args[i].rfind("--config=", 0) == 0) {
      const auto file = read_config_tokens(args[i].substr(9));
      config_tokens.insert(config_tokens.end(), file.begin(), file.end());
    } else {
      rest.push_back(args[i]);
    }
  }
  args.resize(sub + 1);
  args.insert(args.end(), config_tokens.begin(), config_tokens.end());
  args.insert(args.end(), rest.begin(), rest.end());
  return args;
}

void write_text(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file: " + out);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
}

void emit(const phs::table::Table& t, const OutputOptions& o) {
  write_text(o.format == "json" ? phs::table::to_json(t) : phs::table::to_csv(t),
             o.out);
}

std::optional<double> opt_value(const CLI::App* cmd, const std::string& name,
                                double storage) {
  if (cmd->count(name)) return storage;
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Postselected two-qubit sensing toolkit: exact and simulated "
               "signals, peak geometry, susceptibility, Fisher information, "
               "and readout-noise Monte Carlo."};
  app.name(phs::kProjectName);
  app.require_subcommand(1);
  app.set_version_flag("--version",
                       std::string(phs::kProjectName) + " " + phs::kVersion);
  int exit_code = 0;

  // signal ------------------------------------------------------------------
  auto* sig = app.add_subcommand(
      "signal", "Tabulate exact and simulated signal over (lambda, t) grids");
  phs::commands::SignalParams sig_p;
  double sig_kappa = 0.0;
  double sig_lambda = 0.0;
  std::string sig_preset;
  OutputOptions sig_out;
  sig->add_option("--omega", sig_p.omega, "Frequency scale")->capture_default_str();
  sig->add_option("--epsilon", sig_p.epsilon, "Coalescence parameter")
      ->capture_default_str();
  sig->add_option("--kappa", sig_kappa, "Ancilla preparation weight");
  auto* sig_lam = sig->add_option("--lambda", sig_lambda, "Single probe value");
  sig->add_option("--lambda-grid", sig_p.lambda_spec,
                  "Probe grid: start:stop:count or v1,v2,...")
      ->excludes(sig_lam);
  sig->add_option("--t-grid", sig_p.t_spec, "Time grid spec (default 0:20:401)");
  sig->add_option("--preset", sig_preset, "Laboratory-unit conversion columns")
      ->check(CLI::IsMember({"ytterbium-ion"}));
  add_output_options(sig, sig_out);
  add_config_option(sig);
  sig->callback([&] {
    sig_p.kappa = opt_value(sig, "--kappa", sig_kappa);
    if (sig->count("--lambda"))
      sig_p.lambda_spec = phs::table::format_double(sig_lambda);
    if (!sig_preset.empty()) sig_p.preset = &phs::commands::ytterbium_ion();
    emit(phs::commands::cmd_signal(sig_p), sig_out);
  });

  // peak --------------------------------------------------------------------
  auto* peak = app.add_subcommand(
      "peak", "Locate the sharp response peak and its width per epsilon");
  phs::commands::PeakParams peak_p;
  double peak_kappa = 0.0;
  OutputOptions peak_out;
  peak->add_option("--omega", peak_p.omega, "Frequency scale")
      ->capture_default_str();
  peak->add_option("--epsilon", peak_p.eps_spec,
                   "Epsilon list or grid (default 0.01,0.003,0.001)");
  peak->add_option("--kappa", peak_kappa, "Ancilla preparation weight");
  add_output_options(peak, peak_out);
  add_config_option(peak);
  peak->callback([&] {
    peak_p.kappa = opt_value(peak, "--kappa", peak_kappa);
    emit(phs::commands::cmd_peak(peak_p), peak_out);
  });

  // susceptibility ----------------------------------------------------------
  auto* sus = app.add_subcommand(
      "susceptibility",
      "Sweep dS/dlambda and report the optimal working point per epsilon");
  phs::commands::SusceptibilityParams sus_p;
  double sus_kappa = 0.0;
  OutputOptions sus_out;
  sus->add_option("--omega", sus_p.omega, "Frequency scale")->capture_default_str();
  sus->add_option("--epsilon", sus_p.eps_spec,
                  "Epsilon list or grid (default 0.01,0.001,0.0001)");
  sus->add_option("--kappa", sus_kappa, "Ancilla preparation weight");
  sus->add_option("--sweep-points", sus_p.sweep_points,
                  "Lambda points per epsilon block")
      ->capture_default_str();
  add_output_options(sus, sus_out);
  add_config_option(sus);
  sus->callback([&] {
    sus_p.kappa = opt_value(sus, "--kappa", sus_kappa);
    emit(phs::commands::cmd_susceptibility(sus_p), sus_out);
  });

  // fisher ------------------------------------------------------------------
  auto* fis = app.add_subcommand(
      "fisher", "Fisher information of the postselected readout");
  phs::commands::FisherParams fis_p;
  double fis_kappa = 0.0;
  double fis_lambda = 0.0;
  OutputOptions fis_out;
  fis->add_option("--omega", fis_p.omega, "Frequency scale")->capture_default_str();
  fis->add_option("--epsilon", fis_p.epsilon, "Coalescence parameter")
      ->capture_default_str();
  fis->add_option("--kappa", fis_kappa, "Ancilla preparation weight");
  fis->add_option("--runs", fis_p.runs, "Attempted repetitions N")
      ->capture_default_str();
  auto* fis_lam = fis->add_option("--lambda", fis_lambda, "Single probe value");
  fis->add_option("--lambda-grid", fis_p.lambda_spec,
                  "Probe grid (default: the optimal working point)")
      ->excludes(fis_lam);
  add_output_options(fis, fis_out);
  add_config_option(fis);
  fis->callback([&] {
    fis_p.kappa = opt_value(fis, "--kappa", fis_kappa);
    if (fis->count("--lambda"))
      fis_p.lambda_spec = phs::table::format_double(fis_lambda);
    emit(phs::commands::cmd_fisher(fis_p), fis_out);
  });

  // montecarlo --------------------------------------------------------------
  auto* mc = app.add_subcommand(
      "montecarlo", "Readout-noise campaign: sample variance vs prediction");
  phs::commands::MonteCarloParams mc_p;
  mc_p.campaign.runs = 100000;
  mc_p.campaign.repetitions = 50;
  double mc_kappa = 0.0;
  double mc_lambda = 0.0;
  std::string mc_protocol = "pseudo_hermitian";
  std::string mc_correlation = "fully_correlated";
  OutputOptions mc_out;
  mc->add_option("--omega", mc_p.omega, "Frequency scale")->capture_default_str();
  mc->add_option("--epsilon", mc_p.epsilon, "Coalescence parameter")
      ->capture_default_str();
  mc->add_option("--kappa", mc_kappa, "Ancilla preparation weight");
  mc->add_option("--lambda", mc_lambda,
                 "Probe value (default: per-protocol best point)");
  mc->add_option("--protocol", mc_protocol, "Which protocol to sample")
      ->check(CLI::IsMember({"pseudo_hermitian", "ramsey"}))
      ->capture_default_str();
  mc->add_option("-N,--runs", mc_p.campaign.runs, "Attempted runs per repetition")
      ->capture_default_str();
  mc->add_option("-R,--repetitions", mc_p.campaign.repetitions,
                 "Independent repetitions")
      ->check(CLI::Range(2, 1 << 30))
      ->capture_default_str();
  mc->add_option("--seed", mc_p.campaign.seed, "Master RNG seed")->required();
  mc->add_option("--threads", mc_p.campaign.threads,
                 "Worker threads (0: hardware)")
      ->capture_default_str();
  mc->add_option("--m0", mc_p.readout.m0, "Bright mean count")
      ->capture_default_str();
  mc->add_option("--m1", mc_p.readout.m1, "Dark mean count")->capture_default_str();
  mc->add_option("--sigma", mc_p.readout.sigma, "Per-run count noise")
      ->capture_default_str();
  mc->add_option("--xi", mc_p.readout.xi, "Background drift amplitude")
      ->capture_default_str();
  mc->add_option("--correlation", mc_correlation, "Drift correlation across runs")
      ->check(CLI::IsMember({"fully_correlated", "uncorrelated"}))
      ->capture_default_str();
  mc->add_flag("--compare", mc_p.compare,
               "Run both protocols and report the sensitivity ratio");
  add_output_options(mc, mc_out);
  add_config_option(mc);
  mc->callback([&] {
    mc_p.kappa = opt_value(mc, "--kappa", mc_kappa);
    mc_p.lambda = opt_value(mc, "--lambda", mc_lambda);
    mc_p.campaign.protocol = mc_protocol == "ramsey"
                                 ? phs::noisemc::Protocol::ramsey
                                 : phs::noisemc::Protocol::pseudo_hermitian;
    mc_p.readout.correlation = mc_correlation == "uncorrelated"
                                   ? phs::noisemc::Correlation::uncorrelated
                                   : phs::noisemc::Correlation::fully_correlated;
    emit(phs::commands::cmd_montecarlo(mc_p), mc_out);
  });

  // verify ------------------------------------------------------------------
  auto* ver = app.add_subcommand(
      "verify", "Cross-check the two evolution paths and the metric identities");
  phs::commands::VerifyParams ver_p;
  double ver_kappa = 0.0;
  std::string ver_out;
  ver->add_option("--omega", ver_p.omega, "Frequency scale")->capture_default_str();
  ver->add_option("--epsilon", ver_p.epsilon, "Coalescence parameter")
      ->capture_default_str();
  ver->add_option("--kappa", ver_kappa, "Ancilla preparation weight");
  ver->add_option("--corrupt-c", ver_p.coupling_scale,
                  "Scale the derived coupling (negative-control hook)")
      ->group("");
  ver->add_option("--out", ver_out, "Write the report to PATH instead of stdout");
  add_config_option(ver);
  ver->callback([&] {
    ver_p.kappa = opt_value(ver, "--kappa", ver_kappa);
    const auto report = phs::commands::cmd_verify(ver_p);
    write_text(report.text, ver_out);
    if (!report.passed) exit_code = 1;
  });

  for (auto* cmd : {sig, peak, sus, fis, mc, ver})
    for (auto* option : cmd->get_options())
      if (option->get_expected_min() >= 1)
        option->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
