// Command-line front end: reproduces the spectrum, OD-scan, qubit-channel,
// tomography, storage and coincidence pipelines as CSV artifacts.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "nreit/coincidence.hpp"
#include "nreit/config.hpp"
#include "nreit/csv.hpp"
#include "nreit/master_equation.hpp"
#include "nreit/qubit.hpp"
#include "nreit/storage.hpp"
#include "nreit/tomography.hpp"

namespace {

using namespace nreit;

std::vector<double> detuning_grid(const Config& cfg) {
  std::vector<double> grid;
  grid.reserve(cfg.scan_points);
  if (cfg.scan_points < 2 || cfg.scan_max <= cfg.scan_min)
    throw ConfigError("config error at probe: need scan_min < scan_max and scan_points >= 2");
  const double step = (cfg.scan_max - cfg.scan_min) / (cfg.scan_points - 1);
  for (int k = 0; k < cfg.scan_points; ++k) grid.push_back(cfg.scan_min + k * step);
  return grid;
}

int run_spectrum(const Config& cfg, const std::string& out_path) {
  MediumParams medium = cfg.medium;
  medium.gamma_gs = cfg.resolve_gamma_gs();
  auto table = make_table(cfg.atom, cfg.probe_direction);
  auto spectrum = scan_spectrum(cfg.probe_direction, detuning_grid(cfg), cfg.coupling, medium, table);
  CsvWriter csv(out_path);
  csv.header({"detuning_MHz", "T", "Re_chi", "Im_chi"});
  for (const auto& row : spectrum.rows)
    csv.row({gamma_to_mhz(row.delta_p), row.transmission, row.chi.real(), row.chi.imag()});
  return 0;
}

int run_odscan(const Config& cfg, const std::string& out_path) {
  MediumParams medium = cfg.medium;
  medium.gamma_gs = cfg.resolve_gamma_gs();
  auto fw = make_table(cfg.atom, Direction::Forward);
  auto bw = make_table(cfg.atom, Direction::Backward);
  std::vector<double> grid;
  for (double od = 0.0; od <= cfg.od_max + 1e-9; od += cfg.od_step) grid.push_back(od);
  SpectralProfile profile{cfg.pulse_shape, cfg.pulse_bandwidth};
  auto rows = scan_od(grid, cfg.coupling, medium, fw, bw, &profile);
  CsvWriter csv(out_path);
  csv.header({"od", "T_fw", "T_bw", "eta"});
  for (const auto& r : rows) csv.row({r.od, r.t_fw, r.t_bw, r.eta});
  return 0;
}

int run_qubit(const Config& cfg, const std::string& out_path) {
  MediumParams medium = cfg.medium;
  medium.gamma_gs = cfg.resolve_gamma_gs();
  auto fw = make_table(cfg.atom, Direction::Forward);
  auto bw = make_table(cfg.atom, Direction::Backward);
  SpectralProfile profile{cfg.pulse_shape, cfg.pulse_bandwidth};
  const double t_fw = pulse_averaged_transmission(fw, cfg.coupling, medium, profile);
  const double t_bw = pulse_averaged_transmission(bw, cfg.coupling, medium, profile);
  CsvWriter csv(out_path);
  csv.header({"state", "T_fw", "T_bw", "eta", "isolation_db", "fidelity_fw"});
  for (const auto& name : cfg.qubit_states) {
    QubitState in = named_state(name);
    auto fw_result = nraq_apply(in, Direction::Forward, cfg.coupling, medium, fw, cfg.qubit_phase_lr);
    const double eta = contrast_eta(t_fw, t_bw);
    const double iso = isolation_db(1.0, t_bw).db;
    const double fid = fw_result.isolated ? 0.0 : fidelity(fw_result.rho_out, in);
    csv.row_strings({name, CsvWriter::format(t_fw), CsvWriter::format(t_bw),
                     CsvWriter::format(eta), CsvWriter::format(iso), CsvWriter::format(fid)});
  }
  return 0;
}

int run_tomo(const Config& cfg, const std::string& out_path, std::uint64_t seed) {
  QubitState target = cfg.tomo_named ? named_state(cfg.tomo_state)
                                     : make_pure(cfg.tomo_theta, cfg.tomo_phi);
  BasisCounts counts = expected_counts(target, cfg.tomo_n_total);
  if (cfg.tomo_poisson) {
    std::mt19937_64 rng(seed);
    auto draw = [&](double mean) {
      if (mean <= 0.0) return 0.0;
      std::poisson_distribution<long long> dist(mean);
      return static_cast<double>(dist(rng));
    };
    counts = {draw(counts.n_h), draw(counts.n_v), draw(counts.n_d), draw(counts.n_r)};
  }
  ReconResult recon = reconstruct(counts);
  const double fid = fidelity(recon.rho, target);
  McResult mc = mc_uncertainty(counts, cfg.tomo_trials, target, seed + 1);
  CsvWriter csv(out_path);
  csv.header({"entry", "value"});
  const auto& r = recon.rho.rho;
  csv.row_strings({"rho_HH_re", CsvWriter::format(r(0, 0).real())});
  csv.row_strings({"rho_HH_im", CsvWriter::format(r(0, 0).imag())});
  csv.row_strings({"rho_HV_re", CsvWriter::format(r(0, 1).real())});
  csv.row_strings({"rho_HV_im", CsvWriter::format(r(0, 1).imag())});
  csv.row_strings({"rho_VH_re", CsvWriter::format(r(1, 0).real())});
  csv.row_strings({"rho_VH_im", CsvWriter::format(r(1, 0).imag())});
  csv.row_strings({"rho_VV_re", CsvWriter::format(r(1, 1).real())});
  csv.row_strings({"rho_VV_im", CsvWriter::format(r(1, 1).imag())});
  csv.row_strings({"fidelity", CsvWriter::format(fid)});
  csv.row_strings({"sigma_fidelity", CsvWriter::format(mc.sigma_fidelity)});
  return 0;
}

int run_storage(const Config& cfg, const std::string& out_path) {
  MediumParams medium = cfg.medium;
  medium.od = cfg.storage_od;
  medium.gamma_gs = cfg.resolve_gamma_gs();
  auto grid = uniform_grid(cfg.storage_t_end, cfg.storage_dt);
  const PulseShape shape = (cfg.pulse_shape == SpectralProfile::Shape::Gaussian)
                               ? PulseShape::Gaussian
                               : PulseShape::ExpDecay;
  auto pulse = make_pulse(cfg.pulse_bandwidth, shape, cfg.storage_t0, grid);
  auto timeline = make_timeline(grid, cfg.coupling.rabi_c, cfg.storage_t_off, cfg.storage_t_on,
                                cfg.storage_ramp);
  auto result = simulate_eit_storage(pulse, timeline, medium, cfg.probe_direction,
                                     cfg.storage_z_points);
  const double gamma_mhz_angular = 2.0 * M_PI * kGammaMHz;  // rad/us; 1/Gamma in ns:
  const double ns_per_unit = 1e3 / gamma_mhz_angular;
  CsvWriter csv(out_path);
  csv.header({"t_ns", "in_re", "in_im", "out_re", "out_im"});
  for (std::size_t k = 0; k < pulse.t.size(); ++k)
    csv.row({pulse.t[k] * ns_per_unit, pulse.amp[k].real(), pulse.amp[k].imag(),
             result.output.amp[k].real(), result.output.amp[k].imag()});
  CsvWriter summary(out_path + ".summary.csv");
  summary.header({"od", "efficiency", "leaked_fraction", "absorbed_fraction", "peak_spinwave"});
  summary.row({medium.od, result.efficiency, result.leaked_fraction, result.absorbed_fraction,
               result.peak_spinwave});
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

TimeTagStream read_tags_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open tag file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "channel,timestamp_ps")
    throw ConfigError("config error: tag file must start with 'channel,timestamp_ps'");
  std::vector<TimeTagEvent> events;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != 2) throw ConfigError("config error: malformed tag row '" + line + "'");
    TimeTagEvent e;
    if (cells[0] == "S1") e.channel = Channel::S1;
    else if (cells[0] == "S2") e.channel = Channel::S2;
    else throw ConfigError("config error: unknown channel '" + cells[0] + "'");
    e.timestamp_ps = std::stoll(cells[1]);
    events.push_back(e);
  }
  return TimeTagStream::from_events(events);
}

int run_coincidence(const Config& cfg, const std::string& out_path, std::uint64_t seed) {
  TimeTagStream stream;
  if (!cfg.cc_input_path.empty()) {
    stream = read_tags_csv(cfg.cc_input_path);
  } else {
    std::mt19937_64 rng(seed);
    stream = generate_correlated_tags(cfg.cc_pair_rate_hz, cfg.cc_duration_s, cfg.cc_delay_ps,
                                      cfg.cc_keep_s2, cfg.cc_background_rate_hz, rng);
  }
  auto hist = cross_correlate(stream, cfg.cc_bin_ps, cfg.cc_window_ps);
  CsvWriter csv(out_path);
  csv.header({"bin_left_ps", "counts"});
  for (std::size_t k = 0; k < hist.counts.size(); ++k)
    csv.row_strings({std::to_string(hist.bin_left(k)), std::to_string(hist.counts[k])});
  if (hist.empty_channel) std::cerr << "warning: empty channel, histogram is empty\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"non-reciprocal EIT medium simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::uint64_t seed = 1;
  for (const auto& name : {"spectrum", "odscan", "qubit", "tomo", "storage", "coincidence"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_path, "output CSV path")->required();
    sub->add_option("--seed", seed, "random seed");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string name = app.get_subcommands().front()->get_name();

  try {
    Config cfg = config_path.empty() ? Config{} : load_config(config_path);
    if (name == "spectrum") return run_spectrum(cfg, out_path);
    if (name == "odscan") return run_odscan(cfg, out_path);
    if (name == "qubit") return run_qubit(cfg, out_path);
    if (name == "tomo") return run_tomo(cfg, out_path, seed);
    if (name == "storage") return run_storage(cfg, out_path);
    if (name == "coincidence") return run_coincidence(cfg, out_path, seed);
    std::cerr << "unknown subcommand\n";
    return 2;
  } catch (const nreit::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
