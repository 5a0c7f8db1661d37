#include "tfp/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace tfp {

namespace {

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError("config: " + where + " must be an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key()))
      throw ConfigError("config: unknown key \"" + item.key() + "\" in " + where);
  }
}

double get_number(const json& obj, const std::string& where, const std::string& key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    throw ConfigError("config: " + where + "." + key + " must be a number");
  return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& where, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    throw ConfigError("config: " + where + "." + key + " must be an integer");
  return obj[key].get<int>();
}

std::string get_string(const json& obj, const std::string& where, const std::string& key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string())
    throw ConfigError("config: " + where + "." + key + " must be a string");
  return obj[key].get<std::string>();
}

// {kind: string, everything else: numeric parameter}.
void parse_signal_spec(const json& obj, const std::string& where, std::string& kind,
                       SignalParams& params) {
  if (!obj.is_object()) throw ConfigError("config: " + where + " must be an object");
  for (const auto& item : obj.items()) {
    if (item.key() == "kind") {
      if (!item.value().is_string())
        throw ConfigError("config: " + where + ".kind must be a string");
      kind = item.value().get<std::string>();
    } else if (item.value().is_number()) {
      params[item.key()] = item.value().get<double>();
    } else {
      throw ConfigError("config: " + where + "." + item.key() + " must be a number");
    }
  }
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  check_keys(j, "top level",
             {"experiment", "grid", "window", "signal", "lattice", "sectors", "wavefront",
              "propagator", "quadratic", "symbol", "out", "seed"});

  cfg.experiment = get_string(j, "top level", "experiment", cfg.experiment);
  cfg.out = get_string(j, "top level", "out", cfg.out);
  cfg.seed = unsigned(get_int(j, "top level", "seed", int(cfg.seed)));

  if (j.contains("grid")) {
    const json& g = j["grid"];
    check_keys(g, "grid", {"N", "L"});
    cfg.grid = Grid1D(get_number(g, "grid", "L", cfg.grid.L), get_int(g, "grid", "N", cfg.grid.N));
  }

  if (j.contains("window")) {
    cfg.window_params.clear();
    parse_signal_spec(j["window"], "window", cfg.window_kind, cfg.window_params);
  }
  if (j.contains("signal")) {
    cfg.signal_params.clear();
    parse_signal_spec(j["signal"], "signal", cfg.signal_kind, cfg.signal_params);
  }
  if (j.contains("symbol")) {
    parse_signal_spec(j["symbol"], "symbol", cfg.symbol_kind, cfg.symbol_params);
    if (auto it = cfg.symbol_params.find("class_s"); it != cfg.symbol_params.end()) {
      cfg.class_s = it->second;
      cfg.symbol_params.erase(it);
    }
  }

  if (j.contains("lattice")) {
    const json& l = j["lattice"];
    check_keys(l, "lattice", {"alpha", "beta"});
    cfg.alpha = get_number(l, "lattice", "alpha", cfg.alpha);
    cfg.beta = get_number(l, "lattice", "beta", cfg.beta);
  }

  if (j.contains("sectors")) {
    const json& s = j["sectors"];
    check_keys(s, "sectors", {"K", "r0", "R", "shells"});
    cfg.sectors.K = get_int(s, "sectors", "K", cfg.sectors.K);
    cfg.sectors.r0 = get_number(s, "sectors", "r0", cfg.sectors.r0);
    cfg.sectors.R = get_number(s, "sectors", "R", cfg.sectors.R);
    cfg.sectors.shells = get_int(s, "sectors", "shells", cfg.sectors.shells);
  }

  if (j.contains("wavefront")) {
    const json& w = j["wavefront"];
    check_keys(w, "wavefront", {"p", "r", "rho_threshold", "law", "gap_r"});
    if (w.contains("p") && w["p"].is_string()) {
      if (w["p"].get<std::string>() != "inf")
        throw ConfigError("config: wavefront.p must be a number or \"inf\"");
      cfg.p = std::numeric_limits<double>::infinity();
    } else {
      cfg.p = get_number(w, "wavefront", "p", cfg.p);
    }
    cfg.r = get_number(w, "wavefront", "r", cfg.r);
    cfg.rho_threshold = get_number(w, "wavefront", "rho_threshold", cfg.rho_threshold);
    cfg.gap_r = get_number(w, "wavefront", "gap_r", cfg.gap_r);
    cfg.law = get_string(w, "wavefront", "law", cfg.law);
    if (cfg.law != "none" && cfg.law != "propagation" && cfg.law != "microlocality")
      throw ConfigError("config: wavefront.law must be none, propagation or microlocality");
  }

  if (j.contains("propagator")) {
    const json& p = j["propagator"];
    check_keys(p, "propagator", {"method", "steps", "n_max", "t"});
    cfg.method = get_string(p, "propagator", "method", cfg.method);
    cfg.steps = get_int(p, "propagator", "steps", cfg.steps);
    cfg.n_max = get_int(p, "propagator", "n_max", cfg.n_max);
    cfg.t = get_number(p, "propagator", "t", cfg.t);
    if (cfg.steps <= 0) throw ConfigError("config: propagator.steps must be positive");
  }

  if (j.contains("quadratic")) {
    const json& q = j["quadratic"];
    check_keys(q, "quadratic", {"kind", "a", "b", "c"});
    cfg.quadratic_kind = get_string(q, "quadratic", "kind",
                                    q.contains("a") || q.contains("b") || q.contains("c")
                                        ? "custom"
                                        : cfg.quadratic_kind);
    cfg.quadratic.a = get_number(q, "quadratic", "a", 0);
    cfg.quadratic.b = get_number(q, "quadratic", "b", 0);
    cfg.quadratic.c = get_number(q, "quadratic", "c", 0);
    if (cfg.quadratic_kind != "harmonic" && cfg.quadratic_kind != "free" &&
        cfg.quadratic_kind != "custom")
      throw ConfigError("config: quadratic.kind must be harmonic, free or custom");
  }

  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config file " + path + " is not valid JSON");
  return parse_config(j);
}

void apply_override(json& config, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must have the form key=value: " + assignment);
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  json* node = &config;
  size_t start = 0;
  while (true) {
    const size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw ConfigError("override has an empty path segment: " + assignment);
    if (dot == std::string::npos) {
      json parsed = json::parse(value, nullptr, false);
      (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
      return;
    }
    if (!node->contains(key)) (*node)[key] = json::object();
    node = &(*node)[key];
    if (!node->is_object())
      throw ConfigError("override path crosses a non-object value: " + assignment);
    start = dot + 1;
  }
}

json config_to_json(const RunConfig& cfg) {
  json window{{"kind", cfg.window_kind}};
  for (const auto& [k, v] : cfg.window_params) window[k] = v;
  json signal{{"kind", cfg.signal_kind}};
  for (const auto& [k, v] : cfg.signal_params) signal[k] = v;
  json symbol{{"kind", cfg.symbol_kind}, {"class_s", cfg.class_s}};
  for (const auto& [k, v] : cfg.symbol_params) symbol[k] = v;

  return json{
      {"experiment", cfg.experiment},
      {"grid", cfg.grid},
      {"window", window},
      {"signal", signal},
      {"lattice", {{"alpha", cfg.alpha}, {"beta", cfg.beta}}},
      {"sectors", cfg.sectors},
      {"wavefront",
       {{"p", std::isinf(cfg.p) ? json("inf") : json(cfg.p)},
        {"r", cfg.r},
        {"rho_threshold", cfg.rho_threshold},
        {"gap_r", cfg.gap_r},
        {"law", cfg.law}}},
      {"propagator",
       {{"method", cfg.method}, {"steps", cfg.steps}, {"n_max", cfg.n_max}, {"t", cfg.t}}},
      {"quadratic",
       {{"kind", cfg.quadratic_kind},
        {"a", cfg.quadratic.a},
        {"b", cfg.quadratic.b},
        {"c", cfg.quadratic.c}}},
      {"out", cfg.out},
      {"seed", cfg.seed},
  };
}

}  // namespace tfp
