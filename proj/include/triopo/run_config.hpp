#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "triopo/io.hpp"
#include "triopo/params.hpp"
#include "triopo/sde.hpp"

namespace triopo {

/// Frequency grid in units of kappa.
struct OmegaGrid {
  double min = -6.0;
  double max = 6.0;
  double step = 0.01;

  void check() const {
    if (!(step > 0.0) || !(max >= min))
      throw Error(ErrorCode::BadConfig, "omega grid must be monotone with positive step");
  }

  std::vector<double> points(double kappa = 1.0) const {
    check();
    const int n = static_cast<int>(std::llround((max - min) / step));
    std::vector<double> w;
    w.reserve(n + 1);
    for (int i = 0; i <= n; ++i) w.push_back((min + i * step) * kappa);
    return w;
  }
};

/// Fully resolved run description shared by every subcommand; all output
/// files embed its JSON form so results are self-describing.
struct RunConfig {
  SystemParams params;  // pump fields are filled by resolve()
  std::optional<double> pump_ratio;
  std::optional<double> pump_abs;
  OmegaGrid omega;
  TrajectoryConfig sde;
  std::optional<double> divergence_guard;  // defaulted from the steady state
  OutputFormat format = OutputFormat::Csv;
  std::string out_path;
  std::string dump_path;  // optional raw-trajectory dump (sde subcommand)
  double threshold_guard = 1e-6;
  int epr_sign = +1;

  /// Absolute drive amplitude; exactly one of ratio / absolute must be set.
  double resolve_pump() const {
    if (pump_ratio.has_value() == pump_abs.has_value())
      throw Error(ErrorCode::BadConfig,
                  "exactly one of pump ratio and absolute pump must be supplied");
    SystemParams q = params;
    q.pump = {0.0, 0.0, 0.0};
    require_valid(q);
    return pump_abs ? *pump_abs : *pump_ratio * threshold_pump(q);
  }

  /// Parameters with the symmetric drive filled in.
  SystemParams resolved_params() const {
    SystemParams q = params;
    const double e = resolve_pump();
    q.pump = {e, e, e};
    require_valid(q);
    return q;
  }
};

namespace detail {

inline void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw Error(ErrorCode::BadConfig, "unknown key '" + key + "' in " + where);
  }
}

}  // namespace detail

inline Scheme parse_scheme(const std::string& s) {
  if (s == "midpoint") return Scheme::SemiImplicitMidpoint;
  if (s == "euler") return Scheme::EulerMaruyama;
  throw Error(ErrorCode::BadConfig, "unknown scheme '" + s + "' (expected midpoint|euler)");
}

inline const char* scheme_name(Scheme s) {
  return s == Scheme::SemiImplicitMidpoint ? "midpoint" : "euler";
}

/// Parses the nested key-value configuration document.
inline RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig cfg;
  try {
    detail::check_keys(j, {"params", "pump", "omega", "sde", "output", "seed", "threshold_guard",
                           "epr_sign"},
                       "config");
    if (j.contains("params")) {
      const auto& p = j.at("params");
      detail::check_keys(p, {"chi", "gamma", "kappa"}, "params");
      if (p.contains("chi")) {
        if (p.at("chi").is_array()) {
          const auto v = p.at("chi").get<std::vector<double>>();
          if (v.size() != 3)
            throw Error(ErrorCode::BadConfig, "params.chi array must have three entries");
          cfg.params.chi = {v[0], v[1], v[2]};
        } else {
          const double c = p.at("chi").get<double>();
          cfg.params.chi = {c, c, c};
        }
      }
      if (p.contains("gamma")) cfg.params.gamma = p.at("gamma").get<double>();
      if (p.contains("kappa")) cfg.params.kappa = p.at("kappa").get<double>();
    }
    if (j.contains("pump")) {
      const auto& p = j.at("pump");
      detail::check_keys(p, {"ratio", "E"}, "pump");
      if (p.contains("ratio")) cfg.pump_ratio = p.at("ratio").get<double>();
      if (p.contains("E")) cfg.pump_abs = p.at("E").get<double>();
    }
    if (j.contains("omega")) {
      const auto& o = j.at("omega");
      detail::check_keys(o, {"min", "max", "step"}, "omega");
      if (o.contains("min")) cfg.omega.min = o.at("min").get<double>();
      if (o.contains("max")) cfg.omega.max = o.at("max").get<double>();
      if (o.contains("step")) cfg.omega.step = o.at("step").get<double>();
    }
    if (j.contains("sde")) {
      const auto& s = j.at("sde");
      detail::check_keys(s,
                         {"dt", "t_end", "burn_in", "sample_every", "n_traj", "seed", "scheme",
                          "divergence_guard", "noise", "threads"},
                         "sde");
      if (s.contains("dt")) cfg.sde.dt = s.at("dt").get<double>();
      if (s.contains("t_end")) cfg.sde.t_end = s.at("t_end").get<double>();
      if (s.contains("burn_in")) cfg.sde.burn_in = s.at("burn_in").get<double>();
      if (s.contains("sample_every")) cfg.sde.sample_every = s.at("sample_every").get<double>();
      if (s.contains("n_traj")) cfg.sde.n_traj = s.at("n_traj").get<std::size_t>();
      if (s.contains("seed")) cfg.sde.seed = s.at("seed").get<std::uint64_t>();
      if (s.contains("scheme")) cfg.sde.scheme = parse_scheme(s.at("scheme").get<std::string>());
      if (s.contains("divergence_guard"))
        cfg.divergence_guard = s.at("divergence_guard").get<double>();
      if (s.contains("noise")) cfg.sde.noise = s.at("noise").get<bool>();
      if (s.contains("threads")) cfg.sde.n_threads = s.at("threads").get<unsigned>();
    }
    if (j.contains("output")) {
      const auto& o = j.at("output");
      detail::check_keys(o, {"format", "path"}, "output");
      if (o.contains("format")) cfg.format = parse_format(o.at("format").get<std::string>());
      if (o.contains("path")) cfg.out_path = o.at("path").get<std::string>();
    }
    if (j.contains("seed")) cfg.sde.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threshold_guard")) cfg.threshold_guard = j.at("threshold_guard").get<double>();
    if (j.contains("epr_sign")) {
      cfg.epr_sign = j.at("epr_sign").get<int>();
      if (cfg.epr_sign != 1 && cfg.epr_sign != -1)
        throw Error(ErrorCode::BadConfig, "epr_sign must be +1 or -1");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadConfig, std::string("malformed config: ") + e.what());
  }
  return cfg;
}

inline RunConfig config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadConfig, "cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadConfig, std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

/// The fully resolved configuration as embedded into every output file.
inline nlohmann::json resolved_json(const RunConfig& cfg, bool with_pump = true) {
  nlohmann::json j;
  j["params"] = {{"chi", {cfg.params.chi[0], cfg.params.chi[1], cfg.params.chi[2]}},
                 {"gamma", cfg.params.gamma},
                 {"kappa", cfg.params.kappa}};
  if (with_pump) {
    const double e = cfg.resolve_pump();
    SystemParams q = cfg.params;
    q.pump = {0.0, 0.0, 0.0};
    j["pump"] = {{"E", e}, {"ratio", e / threshold_pump(q)}};
  }
  j["omega"] = {{"min", cfg.omega.min}, {"max", cfg.omega.max}, {"step", cfg.omega.step}};
  j["sde"] = {{"dt", cfg.sde.dt},
              {"t_end", cfg.sde.t_end},
              {"burn_in", cfg.sde.burn_in},
              {"sample_every", cfg.sde.sample_every},
              {"n_traj", cfg.sde.n_traj},
              {"seed", cfg.sde.seed},
              {"scheme", scheme_name(cfg.sde.scheme)},
              {"noise", cfg.sde.noise}};
  if (cfg.divergence_guard) j["sde"]["divergence_guard"] = *cfg.divergence_guard;
  j["seed"] = cfg.sde.seed;
  j["threshold_guard"] = cfg.threshold_guard;
  j["epr_sign"] = cfg.epr_sign;
  return j;
}

}  // namespace triopo
