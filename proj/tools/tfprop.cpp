#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tfp/commands.hpp"
#include "tfp/config.hpp"

namespace {

struct SubArgs {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-frequency analysis of Schrodinger propagators"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"stft", "Gabor coefficients of a signal, with norms and peak location"},
      {"frame", "frame bounds, dual window and reconstruction check for a Gabor lattice"},
      {"certify", "Gabor-envelope decay certificate for a quantized symbol"},
      {"propagate", "evolve a signal and check the phase-space center against the flow"},
      {"wavefront", "wave front estimate, or the propagation/microlocality laws"},
      {"example1", "harmonic oscillator end-to-end: kernel, envelope and rotation law"},
      {"example2", "perturbed oscillator: symbol class, norm bounds and propagation law"},
  };
  std::map<const CLI::App*, SubArgs> args;
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    SubArgs& a = args[sub];
    sub->add_option("--config", a.config_path, "JSON config file; all fields optional");
    sub->add_option("--out", a.out_dir, "output directory (default: config value or ./out)");
    sub->add_option("--override", a.overrides, "dotted.path=value config override")
        ->take_all();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const SubArgs& a = args[sub];
  try {
    tfp::json raw = tfp::json::object();
    if (!a.config_path.empty()) {
      std::ifstream in(a.config_path);
      if (!in) throw tfp::ConfigError("cannot read config file " + a.config_path);
      raw = tfp::json::parse(in, nullptr, false);
      if (raw.is_discarded())
        throw tfp::ConfigError("config file " + a.config_path + " is not valid JSON");
    }
    for (const std::string& kv : a.overrides) tfp::apply_override(raw, kv);
    tfp::RunConfig cfg = tfp::parse_config(raw);
    if (!a.out_dir.empty()) cfg.out = a.out_dir;
    return tfp::run_command(sub->get_name(), cfg);
  } catch (const tfp::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
