#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "awpri/arima.hpp"
#include "awpri/index.hpp"
#include "awpri/panel.hpp"
#include "awpri/sensitivity.hpp"

namespace awpri::app {

inline constexpr const char* kToolName = "awpri";
inline constexpr const char* kToolVersion = "1.0.0";

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kConfigError = 2, kDataError = 3, kNumericalError = 4 };

/// Resolved run settings. Every value starts from a built-in default, is
/// overridden by the config file, then by command-line flags.
struct RunConfig {
  std::string input;
  std::string specs;
  std::string scores_input;
  char delimiter = ',';
  std::string output_dir = "awpri_out";
  std::uint64_t seed = 42;
  LayerWeights weights = LayerWeights::equal();
  TierThresholds thresholds;
  std::optional<int> year;

  int cluster_k = 4;
  std::vector<int> cluster_k_range;
  int cluster_n_init = 50;

  bool tests_continuity = true;

  std::vector<std::string> did_treated;
  std::string did_treat_code;
  int did_treat_year = 2019;
  double did_treat_threshold = 1.0;
  int did_pre_first = 2004, did_pre_last = 2016;
  int did_post_first = 2019, did_post_last = 2022;
  std::vector<int> did_excluded;
  int did_outcome = 0;

  std::string hausman_outcome;
  std::vector<std::string> hausman_regressors;
  bool hausman_time_effects = false;

  std::vector<ArimaOrder> forecast_grid;
  int forecast_horizon = 8;
  double forecast_level = 0.95;
  bool forecast_drift = true;
  int forecast_outcome = 0;

  double sens_step = 0.05;
  double sens_tol = 0.10;
  TierSource sens_tiers = TierSource::thresholds;

  std::string synth_kind = "scores";
  std::size_t synth_countries = 25;
  int synth_first_year = 2004;
  int synth_last_year = 2022;
  double synth_base_level = 0.45;
  double synth_country_sd = 0.05;
  double synth_year_sd = 0.01;
  double synth_trend_sd = 0.0;
  double synth_att = 0.05;
  double synth_noise_sd = 0.01;
  std::size_t synth_treated = 14;
  int synth_post_first = 2019;
  bool synth_clamp = true;
  double synth_missing_rate = 0.0;

  /// Sorted `key = value` lines of every setting except file locations
  /// (inputs are identified by their content digest instead).
  std::string canonical;
  /// FNV-1a 64 of `canonical`, 16 hex digits.
  std::string digest;
};

/// Built-in defaults as config-file text values.
const std::map<std::string, std::string>& default_settings();

/// Resolves defaults <- file <- overrides. Unknown keys and invalid values
/// are ConfigErrors.
RunConfig resolve_config(const std::optional<std::string>& config_path,
                         const std::map<std::string, std::string>& overrides);

std::string fnv1a64_hex(std::string_view bytes);

/// Subcommands. Each writes its files into cfg.output_dir and a short summary
/// to `out`; errors propagate as awpri exceptions.
void cmd_score(const RunConfig& cfg, std::ostream& out);
void cmd_cluster(const RunConfig& cfg, std::ostream& out);
void cmd_pca(const RunConfig& cfg, std::ostream& out);
void cmd_tests(const RunConfig& cfg, std::ostream& out);
void cmd_did(const RunConfig& cfg, std::ostream& out);
void cmd_hausman(const RunConfig& cfg, std::ostream& out);
void cmd_forecast(const RunConfig& cfg, std::ostream& out);
void cmd_sensitivity(const RunConfig& cfg, std::ostream& out);
void cmd_report(const RunConfig& cfg, std::ostream& out);
void cmd_synth(const RunConfig& cfg, std::ostream& out);

/// Full command line (args[0] is the program name). Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace awpri::app
