#pragma once

// Named figure scenarios, flat key=value configuration, and CSV output.

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace phsq {

struct ScenarioConfig {
  std::string scenario;

  int N = 10;
  double omega_a = 1000.0;
  double Q = 1000.0;
  double n_th = 0.0;

  int M = 0;
  double eta = 0.0;
  double omega_c = 1.0;
  double lambda = 4.0;

  double gt_max = 0.0;  // 0: scenario default
  double step = 0.5;
  int samples = 200;    // fig1 points per trajectory
  int m_max = 3;        // fig1 largest |m|
  std::vector<double> curve_values;

  std::string sweep_param = "Q";
  double sweep_min = 100.0;
  double sweep_max = 1e6;
  int sweep_points = 17;
  std::string sweep_scale = "log";

  std::string backend = "numeric";
  long seed = 0;  // reserved; every computation is deterministic
  int threads = 1;

  /// Config-file line that last set each key (0: preset or override).
  std::map<std::string, int> source_lines;
};

const std::vector<std::string>& scenario_names();

/// Preset for a scenario name. Throws ConfigError for unknown names.
ScenarioConfig preset(std::string_view scenario);

/// Applies `key=value` lines on top of cfg. '#' starts a comment; blank lines
/// are ignored. Errors carry the key and 1-based line.
void apply_config_text(ScenarioConfig& cfg, std::string_view text);
/// Single `key=value` override (line number 0).
void apply_override(ScenarioConfig& cfg, std::string_view assignment);
/// Range and consistency checks; throws ConfigError naming the key.
void validate(const ScenarioConfig& cfg);

/// Preset, then config text, then overrides, then validation.
ScenarioConfig parse_config(std::string_view scenario, std::string_view text,
                            const std::vector<std::string>& overrides = {});

/// Every parameter as key=value strings in a fixed order.
std::vector<std::pair<std::string, std::string>> describe(const ScenarioConfig& cfg);

struct ResultTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Lexicographic row order on the column values.
  void sort_rows();
};

ResultTable run_scenario(const ScenarioConfig& cfg);

/// Shortest round-trip text is not used; values always carry 17 significant digits.
std::string format_number(double v);
std::string to_csv(const ResultTable& table);
void write_csv(const ResultTable& table, const std::string& path);

}  // namespace phsq
