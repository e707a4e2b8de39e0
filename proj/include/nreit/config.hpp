#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nreit/atomic.hpp"
#include "nreit/qubit.hpp"
#include "nreit/storage.hpp"
#include "nreit/susceptibility.hpp"
#include "nreit/units.hpp"

namespace nreit {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Run configuration parsed from JSON. Rates carry explicit unit suffixes
/// ("MHz" or "Gamma"); times are plain numbers in 1/Gamma.
struct Config {
  AtomSpec atom;
  MediumParams medium{19.0, 0.5, -1.0, 1.0};  // gamma_gs < 0 means "calibrate"
  CouplingParams coupling{2.5, 0.0};
  double calibration_target = 0.929;
  double calibration_od = 19.0;

  Direction probe_direction = Direction::Forward;
  double probe_rabi = 1e-3;
  double scan_min = mhz_to_gamma(-18.0);
  double scan_max = mhz_to_gamma(22.0);
  int scan_points = 201;

  SpectralProfile::Shape pulse_shape = SpectralProfile::Shape::ExpDecay;
  double pulse_bandwidth = mhz_to_gamma(1.60);

  double od_max = 30.0;
  double od_step = 2.0;

  // storage timing, units of 1/Gamma
  double storage_od = 54.0;
  double storage_t0 = 25.0;
  double storage_t_off = 30.0;
  double storage_t_on = 100.0;
  double storage_ramp = 2.0;
  double storage_t_end = 140.0;
  double storage_dt = 0.02;
  int storage_z_points = 256;

  std::string tomo_state = "D";
  double tomo_theta = 0.0, tomo_phi = 0.0;
  bool tomo_named = true;
  double tomo_n_total = 1e5;
  int tomo_trials = 200;
  bool tomo_poisson = true;

  std::vector<std::string> qubit_states{"H", "V", "R", "D"};
  double qubit_phase_lr = 0.0;

  double cc_pair_rate_hz = 2e4;
  double cc_background_rate_hz = 1e3;
  double cc_duration_s = 10.0;
  std::int64_t cc_delay_ps = 8000;
  std::int64_t cc_bin_ps = 1600;
  std::int64_t cc_window_ps = 200000;
  double cc_keep_s2 = 0.6;
  std::string cc_input_path;  // when set, read tags from CSV instead of generating

  /// gamma_gs: explicit value, or calibrated against the target forward
  /// transmission when the config leaves it unset.
  double resolve_gamma_gs() const {
    if (medium.gamma_gs >= 0.0) return medium.gamma_gs;
    return calibrate_gamma_gs(calibration_target, calibration_od, coupling.rabi_c,
                              make_table(atom, Direction::Forward), medium.gamma_ge);
  }
};

namespace detail {

using nlohmann::json;

inline void check_keys(const json& j, const std::string& path,
                       const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("config error at " + path + "." + it.key() + ": unknown key");
}

inline double get_rate(const json& j, const std::string& path, const std::string& key,
                       double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  try {
    if (v.is_number()) return v.get<double>();  // bare numbers are Gamma units
    if (v.is_string()) return parse_rate(v.get<std::string>());
  } catch (const std::exception& e) {
    throw ConfigError("config error at " + path + "." + key + ": " + e.what());
  }
  throw ConfigError("config error at " + path + "." + key + ": expected number or rate string");
}

template <typename T>
inline T get_plain(const json& j, const std::string& path, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const std::exception& e) {
    throw ConfigError("config error at " + path + "." + key + ": " + e.what());
  }
}

inline Direction parse_direction(const std::string& s, const std::string& path) {
  if (s == "forward") return Direction::Forward;
  if (s == "backward") return Direction::Backward;
  throw ConfigError("config error at " + path + ": direction must be 'forward' or 'backward'");
}

}  // namespace detail

inline Config parse_config(const nlohmann::json& j) {
  using detail::check_keys;
  using detail::get_plain;
  using detail::get_rate;
  Config cfg;
  check_keys(j, "<root>", {"atom", "medium", "coupling", "probe", "pulse", "odscan", "storage",
                           "tomography", "qubit", "coincidence"});
  if (j.contains("atom")) {
    const auto& a = j.at("atom");
    check_keys(a, "atom", {"f_g", "f_s", "f_e"});
    cfg.atom.f_g = get_plain(a, "atom", "f_g", cfg.atom.f_g);
    cfg.atom.f_s = get_plain(a, "atom", "f_s", cfg.atom.f_s);
    cfg.atom.f_e = get_plain(a, "atom", "f_e", cfg.atom.f_e);
  }
  if (j.contains("medium")) {
    const auto& m = j.at("medium");
    check_keys(m, "medium", {"od", "gamma_ge", "gamma_gs", "calibration_target", "calibration_od"});
    cfg.medium.od = get_plain(m, "medium", "od", cfg.medium.od);
    cfg.medium.gamma_ge = get_rate(m, "medium", "gamma_ge", cfg.medium.gamma_ge);
    if (m.contains("gamma_gs")) cfg.medium.gamma_gs = get_rate(m, "medium", "gamma_gs", -1.0);
    cfg.calibration_target = get_plain(m, "medium", "calibration_target", cfg.calibration_target);
    cfg.calibration_od = get_plain(m, "medium", "calibration_od", cfg.calibration_od);
  }
  if (j.contains("coupling")) {
    const auto& c = j.at("coupling");
    check_keys(c, "coupling", {"rabi_c", "delta_c"});
    cfg.coupling.rabi_c = get_rate(c, "coupling", "rabi_c", cfg.coupling.rabi_c);
    cfg.coupling.delta_c = get_rate(c, "coupling", "delta_c", cfg.coupling.delta_c);
  }
  if (j.contains("probe")) {
    const auto& p = j.at("probe");
    check_keys(p, "probe", {"direction", "rabi_p", "scan_min", "scan_max", "scan_points"});
    if (p.contains("direction"))
      cfg.probe_direction =
          detail::parse_direction(p.at("direction").get<std::string>(), "probe.direction");
    cfg.probe_rabi = get_rate(p, "probe", "rabi_p", cfg.probe_rabi);
    cfg.scan_min = get_rate(p, "probe", "scan_min", cfg.scan_min);
    cfg.scan_max = get_rate(p, "probe", "scan_max", cfg.scan_max);
    cfg.scan_points = get_plain(p, "probe", "scan_points", cfg.scan_points);
  }
  if (j.contains("pulse")) {
    const auto& p = j.at("pulse");
    check_keys(p, "pulse", {"bandwidth", "shape"});
    cfg.pulse_bandwidth = get_rate(p, "pulse", "bandwidth", cfg.pulse_bandwidth);
    if (p.contains("shape")) {
      const std::string s = p.at("shape").get<std::string>();
      if (s == "gaussian") cfg.pulse_shape = SpectralProfile::Shape::Gaussian;
      else if (s == "exp-decay") cfg.pulse_shape = SpectralProfile::Shape::ExpDecay;
      else throw ConfigError("config error at pulse.shape: must be 'gaussian' or 'exp-decay'");
    }
  }
  if (j.contains("odscan")) {
    const auto& o = j.at("odscan");
    check_keys(o, "odscan", {"od_max", "od_step"});
    cfg.od_max = get_plain(o, "odscan", "od_max", cfg.od_max);
    cfg.od_step = get_plain(o, "odscan", "od_step", cfg.od_step);
  }
  if (j.contains("storage")) {
    const auto& s = j.at("storage");
    check_keys(s, "storage",
               {"od", "t0", "t_off", "t_on", "ramp", "t_end", "dt", "z_points", "direction"});
    cfg.storage_od = get_plain(s, "storage", "od", cfg.storage_od);
    cfg.storage_t0 = get_plain(s, "storage", "t0", cfg.storage_t0);
    cfg.storage_t_off = get_plain(s, "storage", "t_off", cfg.storage_t_off);
    cfg.storage_t_on = get_plain(s, "storage", "t_on", cfg.storage_t_on);
    cfg.storage_ramp = get_plain(s, "storage", "ramp", cfg.storage_ramp);
    cfg.storage_t_end = get_plain(s, "storage", "t_end", cfg.storage_t_end);
    cfg.storage_dt = get_plain(s, "storage", "dt", cfg.storage_dt);
    cfg.storage_z_points = get_plain(s, "storage", "z_points", cfg.storage_z_points);
  }
  if (j.contains("tomography")) {
    const auto& t = j.at("tomography");
    check_keys(t, "tomography", {"state", "theta", "phi", "n_total", "trials", "poisson"});
    if (t.contains("state")) {
      cfg.tomo_state = t.at("state").get<std::string>();
      cfg.tomo_named = true;
    }
    if (t.contains("theta") || t.contains("phi")) {
      cfg.tomo_theta = get_plain(t, "tomography", "theta", 0.0);
      cfg.tomo_phi = get_plain(t, "tomography", "phi", 0.0);
      cfg.tomo_named = false;
    }
    cfg.tomo_n_total = get_plain(t, "tomography", "n_total", cfg.tomo_n_total);
    cfg.tomo_trials = get_plain(t, "tomography", "trials", cfg.tomo_trials);
    cfg.tomo_poisson = get_plain(t, "tomography", "poisson", cfg.tomo_poisson);
  }
  if (j.contains("qubit")) {
    const auto& q = j.at("qubit");
    check_keys(q, "qubit", {"states", "phase_lr"});
    if (q.contains("states")) cfg.qubit_states = q.at("states").get<std::vector<std::string>>();
    cfg.qubit_phase_lr = get_plain(q, "qubit", "phase_lr", cfg.qubit_phase_lr);
  }
  if (j.contains("coincidence")) {
    const auto& c = j.at("coincidence");
    check_keys(c, "coincidence",
               {"pair_rate_hz", "background_rate_hz", "duration_s", "delay_ps", "bin_ps",
                "window_ps", "keep_s2", "input"});
    cfg.cc_pair_rate_hz = get_plain(c, "coincidence", "pair_rate_hz", cfg.cc_pair_rate_hz);
    cfg.cc_background_rate_hz =
        get_plain(c, "coincidence", "background_rate_hz", cfg.cc_background_rate_hz);
    cfg.cc_duration_s = get_plain(c, "coincidence", "duration_s", cfg.cc_duration_s);
    cfg.cc_delay_ps = get_plain(c, "coincidence", "delay_ps", cfg.cc_delay_ps);
    cfg.cc_bin_ps = get_plain(c, "coincidence", "bin_ps", cfg.cc_bin_ps);
    cfg.cc_window_ps = get_plain(c, "coincidence", "window_ps", cfg.cc_window_ps);
    cfg.cc_keep_s2 = get_plain(c, "coincidence", "keep_s2", cfg.cc_keep_s2);
    cfg.cc_input_path = get_plain<std::string>(c, "coincidence", "input", "");
  }
  return cfg;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config error in '" + path + "': " + e.what());
  }
  return parse_config(j);
}

/// Named polarization state lookup used by the tomo and qubit subcommands.
inline QubitState named_state(const std::string& name) {
  if (name == "H") return state_h();
  if (name == "V") return state_v();
  if (name == "D") return state_d();
  if (name == "R") return state_r();
  throw ConfigError("config error: unknown state '" + name + "' (expected H, V, D or R)");
}

}  // namespace nreit
