#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "nreit/susceptibility.hpp"

namespace nreit {

enum class PulseShape { Gaussian, ExpDecay };

/// Time-sampled complex field envelope on a uniform grid (Gamma units).
struct PulseWaveform {
  std::vector<double> t;
  std::vector<complexd> amp;

  double dt() const {
    if (t.size() < 2) throw std::domain_error("PulseWaveform: need at least 2 samples");
    return t[1] - t[0];
  }
  double energy() const {
    double e = 0.0;
    for (const auto& a : amp) e += std::norm(a);
    return e * dt();
  }
  double peak_time() const {
    std::size_t k = 0;
    for (std::size_t i = 0; i < amp.size(); ++i)
      if (std::norm(amp[i]) > std::norm(amp[k])) k = i;
    return t[k];
  }
};

inline std::vector<double> uniform_grid(double t_end, double dt) {
  std::vector<double> t;
  const int n = static_cast<int>(std::floor(t_end / dt)) + 1;
  t.reserve(n);
  for (int k = 0; k < n; ++k) t.push_back(k * dt);
  return t;
}

/// Unit-energy envelope centered/starting at t0 whose spectral intensity
/// |S(w)|^2 has the stated FWHM bandwidth. The exp-decay shape reproduces
/// the asymmetric heralded-photon wave packet.
inline PulseWaveform make_pulse(double bandwidth, PulseShape shape, double t0,
                                std::vector<double> t_grid) {
  if (bandwidth <= 0.0) throw std::domain_error("make_pulse: bandwidth must be positive");
  if (t_grid.size() < 2) throw std::domain_error("make_pulse: grid too short");
  const double dt = t_grid[1] - t_grid[0];
  for (std::size_t k = 1; k < t_grid.size(); ++k)
    if (std::abs((t_grid[k] - t_grid[k - 1]) - dt) > 1e-9 * dt)
      throw std::domain_error("make_pulse: grid not uniform");
  if (dt > 1.0 / (8.0 * bandwidth))
    throw std::domain_error("make_pulse: grid too coarse (< 8 samples per 1/bandwidth)");
  PulseWaveform p;
  p.t = std::move(t_grid);
  p.amp.resize(p.t.size());
  if (shape == PulseShape::Gaussian) {
    const double sigma = std::sqrt(2.0 * std::log(2.0)) / bandwidth;
    for (std::size_t k = 0; k < p.t.size(); ++k) {
      const double x = p.t[k] - t0;
      p.amp[k] = std::exp(-x * x / (4.0 * sigma * sigma));
    }
  } else {
    for (std::size_t k = 0; k < p.t.size(); ++k) {
      const double x = p.t[k] - t0;
      p.amp[k] = (x < 0.0) ? 0.0 : std::exp(-0.5 * bandwidth * x);
    }
  }
  const double e = p.energy();
  if (e <= 0.0) throw std::domain_error("make_pulse: zero energy on this grid");
  const double scale = 1.0 / std::sqrt(e);
  for (auto& a : p.amp) a *= scale;
  return p;
}

/// Coupling Rabi frequency vs time: on -> raised-cosine off -> off ->
/// raised-cosine on. Sampled on the same grid as the probe pulse.
struct CouplingTimeline {
  std::vector<double> t;
  std::vector<double> omega_c;
  double ramp = 2.0;
  double t_off = 0.0;  // start of the write ramp; +inf means never switched
  double t_on = 0.0;   // start of the read ramp
};

inline CouplingTimeline make_timeline(const std::vector<double>& t_grid, double rabi_c,
                                      double t_off, double t_on, double ramp) {
  if (ramp <= 0.0) throw std::domain_error("make_timeline: ramp must be positive");
  if (rabi_c < 0.0) throw std::domain_error("make_timeline: negative rabi_c");
  CouplingTimeline tl;
  tl.t = t_grid;
  tl.ramp = ramp;
  tl.t_off = t_off;
  tl.t_on = t_on;
  tl.omega_c.resize(t_grid.size());
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const double t = t_grid[k];
    double v;
    if (t < t_off) v = rabi_c;
    else if (t < t_off + ramp) v = rabi_c * 0.5 * (1.0 + std::cos(M_PI * (t - t_off) / ramp));
    else if (t < t_on) v = 0.0;
    else if (t < t_on + ramp) v = rabi_c * 0.5 * (1.0 - std::cos(M_PI * (t - t_on) / ramp));
    else v = rabi_c;
    tl.omega_c[k] = v;
  }
  return tl;
}

inline CouplingTimeline constant_timeline(const std::vector<double>& t_grid, double rabi_c) {
  CouplingTimeline tl;
  tl.t = t_grid;
  tl.t_off = std::numeric_limits<double>::infinity();
  tl.t_on = std::numeric_limits<double>::infinity();
  tl.omega_c.assign(t_grid.size(), rabi_c);
  return tl;
}

struct StorageResult {
  PulseWaveform output;
  std::vector<complexd> spinwave_snapshot;  // S(z) at coupling-off
  double input_energy = 0.0;
  double efficiency = 0.0;       // retrieved energy (after read ramp) / input
  double leaked_fraction = 0.0;  // transmitted before the read gate
  double absorbed_fraction = 0.0;  // decay integrals plus residual excitation
  double peak_spinwave = 0.0;      // max_z |S| at coupling-off
  double read_gate_start = 0.0;
  std::vector<std::string> warnings;
};

/// Integrates the three-field 1-D propagation model on a comoving grid:
/// the field advection is treated exactly (adiabatic elimination of the
/// transit time), the local (P, S) ODEs by implicit midpoint. Forward uses
/// one effective Lambda link; backward splits the population into the
/// stretched two-level share (no coupling partner) and the paired share,
/// matching the backward susceptibility structure.
inline StorageResult simulate_eit_storage(const PulseWaveform& pulse,
                                          const CouplingTimeline& timeline,
                                          const MediumParams& medium, Direction direction,
                                          int z_points) {
  medium.validate();
  if (z_points < 64) throw std::domain_error("simulate_eit_storage: z_points must be >= 64");
  if (pulse.t.size() != timeline.t.size())
    throw std::domain_error("simulate_eit_storage: pulse and timeline grids differ");
  const double dt = pulse.dt();
  double oc_max = 0.0;
  for (double v : timeline.omega_c) oc_max = std::max(oc_max, v);
  // implicit midpoint is A-stable; this bound keeps the local truncation
  // error of the fastest rate below ~1%
  const double dt_max = 0.25 / std::max({1.0, oc_max, medium.gamma_ge});
  if (dt > dt_max)
    throw std::domain_error("simulate_eit_storage: time step too coarse, need dt <= " +
                            std::to_string(dt_max));

  StorageResult result;
  if (oc_max > 0.0 && timeline.ramp < 5.0 * medium.gamma_ge / (oc_max * oc_max))
    result.warnings.push_back("non-adiabatic coupling ramp");

  const double length = 1.0;
  const double dz = length / (z_points - 1);
  // orphan / paired population shares of the optical coupling strength
  std::vector<double> g2_share;
  std::vector<bool> paired;
  if (direction == Direction::Forward) {
    g2_share = {1.0};
    paired = {true};
  } else {
    AtomSpec atom;  // default manifolds
    TransitionTable bw = make_table(atom, Direction::Backward);
    double w_orphan = 0.0, w_paired = 0.0;
    for (const auto& link : bw.links)
      (link.has_coupling ? w_paired : w_orphan) += link.weight;
    const double n = atom.ground_sublevels();
    g2_share = {w_orphan / n, w_paired / n};
    paired = {false, true};
  }
  const int n_comp = static_cast<int>(g2_share.size());
  std::vector<double> g(n_comp);
  for (int j = 0; j < n_comp; ++j)
    g[j] = std::sqrt(medium.od * medium.gamma_ge / (2.0 * length) * g2_share[j]);

  std::vector<std::vector<complexd>> pol(n_comp, std::vector<complexd>(z_points, 0.0));
  std::vector<complexd> spin(z_points, 0.0);
  std::vector<complexd> field(z_points, 0.0);

  result.output.t = pulse.t;
  result.output.amp.assign(pulse.t.size(), 0.0);
  result.input_energy = pulse.energy();
  result.read_gate_start = timeline.t_on;

  double absorbed = 0.0;
  bool snapshot_taken = false;
  const double gge = medium.gamma_ge, ggs = medium.gamma_gs;

  for (std::size_t k = 0; k < pulse.t.size(); ++k) {
    const double om = 0.5 * timeline.omega_c[k];  // half-Rabi in the ODEs
    // field integration along z given the current polarization
    field[0] = pulse.amp[k];
    std::vector<complexd> src(z_points, 0.0);
    for (int j = 0; j < n_comp; ++j)
      for (int iz = 0; iz < z_points; ++iz) src[iz] += complexd(0.0, g[j]) * pol[j][iz];
    for (int iz = 1; iz < z_points; ++iz)
      field[iz] = field[iz - 1] + 0.5 * dz * (src[iz] + src[iz - 1]);
    result.output.amp[k] = field[z_points - 1];

    // atomic update, implicit midpoint of the linear local system
    for (int j = 0; j < n_comp; ++j) {
      if (paired[j]) {
        // d/dt (P, S) = A (P, S) + (i g E, 0), A = [[-gge, i om], [i om, -ggs]]
        const complexd a11 = -gge, a12 = complexd(0.0, om), a21 = a12, a22 = -ggs;
        const complexd m1_11 = 1.0 - 0.5 * dt * a11, m1_12 = -0.5 * dt * a12;
        const complexd m1_21 = -0.5 * dt * a21, m1_22 = 1.0 - 0.5 * dt * a22;
        const complexd det = m1_11 * m1_22 - m1_12 * m1_21;
        const complexd m0_11 = 1.0 + 0.5 * dt * a11, m0_12 = 0.5 * dt * a12;
        const complexd m0_21 = 0.5 * dt * a21, m0_22 = 1.0 + 0.5 * dt * a22;
        for (int iz = 0; iz < z_points; ++iz) {
          const complexd b1 = dt * complexd(0.0, g[j]) * field[iz];
          const complexd r1 = m0_11 * pol[j][iz] + m0_12 * spin[iz] + b1;
          const complexd r2 = m0_21 * pol[j][iz] + m0_22 * spin[iz];
          pol[j][iz] = (r1 * m1_22 - r2 * m1_12) / det;
          spin[iz] = (m1_11 * r2 - m1_21 * r1) / det;
        }
      } else {
        const double c0 = 1.0 - 0.5 * dt * gge, c1 = 1.0 + 0.5 * dt * gge;
        for (int iz = 0; iz < z_points; ++iz)
          pol[j][iz] = (pol[j][iz] * c0 + dt * complexd(0.0, g[j]) * field[iz]) / c1;
      }
    }

    // decay bookkeeping (trapezoid in z)
    double decay = 0.0;
    for (int iz = 0; iz < z_points; ++iz) {
      const double wz = (iz == 0 || iz == z_points - 1) ? 0.5 : 1.0;
      double p2 = 0.0;
      for (int j = 0; j < n_comp; ++j) p2 += std::norm(pol[j][iz]);
      decay += wz * (2.0 * gge * p2 + 2.0 * ggs * std::norm(spin[iz]));
    }
    absorbed += decay * dz * dt;

    if (!snapshot_taken && timeline.omega_c[k] == 0.0) {
      result.spinwave_snapshot = spin;
      snapshot_taken = true;
    }
    for (int iz = 0; iz < z_points; ++iz)
      result.peak_spinwave = std::max(result.peak_spinwave, std::abs(spin[iz]));
  }
  if (!snapshot_taken) result.spinwave_snapshot = spin;

  // residual atomic excitation at the end of the window counts as absorbed
  double residual = 0.0;
  for (int iz = 0; iz < z_points; ++iz) {
    const double wz = (iz == 0 || iz == z_points - 1) ? 0.5 : 1.0;
    double p2 = 0.0;
    for (int j = 0; j < n_comp; ++j) p2 += std::norm(pol[j][iz]);
    residual += wz * (p2 + std::norm(spin[iz]));
  }
  absorbed += residual * dz;

  double e_gated = 0.0, e_leaked = 0.0;
  for (std::size_t k = 0; k < result.output.t.size(); ++k) {
    const double e = std::norm(result.output.amp[k]) * dt;
    if (result.output.t[k] >= timeline.t_on) e_gated += e; else e_leaked += e;
  }
  result.efficiency = e_gated / result.input_energy;
  result.leaked_fraction = e_leaked / result.input_energy;
  result.absorbed_fraction = absorbed / result.input_energy;
  return result;
}

struct GatedEfficiency {
  double value = 0.0;
  bool empty_gate_warning = false;
};

/// Energy of the output inside [gate_start, gate_end] divided by the input
/// energy.
inline GatedEfficiency storage_efficiency(const StorageResult& result, double gate_start,
                                          double gate_end) {
  if (result.output.t.empty()) throw std::domain_error("storage_efficiency: empty result");
  if (gate_start < result.output.t.front() || gate_end > result.output.t.back() + 1e-12)
    throw std::domain_error("storage_efficiency: gate outside simulation window");
  const double dt = result.output.dt();
  double e = 0.0;
  bool any = false;
  for (std::size_t k = 0; k < result.output.t.size(); ++k) {
    if (result.output.t[k] >= gate_start && result.output.t[k] <= gate_end) {
      e += std::norm(result.output.amp[k]) * dt;
      any = true;
    }
  }
  GatedEfficiency out;
  out.value = e / result.input_energy;
  out.empty_gate_warning = !any;
  return out;
}

}  // namespace nreit
