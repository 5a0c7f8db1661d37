#pragma once
#include <string>

#include "tfp/config.hpp"

namespace tfp {

// Run one CLI subcommand: creates <out>/<experiment>/, writes report.json
// plus the CSV/JSON exports, prints a one-line summary. Returns the process
// exit code: 0 when every certificate passes, 1 on a certificate failure
// (the report is retained). Configuration problems throw ConfigError.
// Subcommands: stft, frame, certify, propagate, wavefront, example1,
// example2.
int run_command(const std::string& command, const RunConfig& cfg);

}  // namespace tfp
