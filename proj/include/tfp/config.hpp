#pragma once
#include <cmath>
#include <string>

#include "tfp/serialize.hpp"

namespace tfp {

// Fully resolved run configuration. Every field has a desk-scale default, so
// an empty config file (or none at all) is a valid run; unknown keys are
// rejected rather than ignored.
struct RunConfig {
  std::string experiment;  // output subdirectory; empty = the command name

  Grid1D grid{std::sqrt(512.0), 512};

  std::string window_kind = "gaussian";
  SignalParams window_params{{"width", 1.0}};
  std::string signal_kind = "gaussian";
  SignalParams signal_params{{"width", 1.0}};

  // Gabor lattice steps; 0 = full resolution (stft) resp. 1/2 (frame).
  double alpha = 0, beta = 0;

  SectorGrid sectors;
  double rho_threshold = 3.0;
  // p = 0 selects the rapid-decay estimate; p >= 1 the weighted integral.
  double p = 0;
  double r = 0.4;
  // Exploratory weight exponent for the example-2 gap region; <= 0 skips it.
  double gap_r = 0.7;
  std::string law = "none";  // none | propagation | microlocality

  std::string method = "auto";  // auto | free | harmonic | quadratic | split_step | dyson
  std::string quadratic_kind = "harmonic";  // harmonic | free | custom
  QuadraticForm quadratic;
  int steps = 128;
  int n_max = 6;
  double t = 0.5;

  std::string symbol_kind = "none";  // none | one | sin_pow | bump
  SignalParams symbol_params;
  // Gabor-envelope decay class of the symbol; 0 = derive from the kind.
  double class_s = 0;

  std::string out = "out";
  unsigned seed = 1;
};

// Parse and validate a config object; missing fields keep their defaults,
// unknown keys and malformed values throw ConfigError.
RunConfig parse_config(const json& j);
RunConfig load_config(const std::string& path);

// Apply "dotted.path=value" onto the raw config object; the value is parsed
// as a JSON literal when possible and kept as a string otherwise.
void apply_override(json& config, const std::string& assignment);

// The fully resolved configuration, as embedded in every report.
json config_to_json(const RunConfig& cfg);

}  // namespace tfp
