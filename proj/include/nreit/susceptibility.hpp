#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "nreit/atomic.hpp"
#include "nreit/units.hpp"

namespace nreit {

using complexd = std::complex<double>;

struct ProbeParams {
  double delta_p = 0.0;  // single-photon detuning, Gamma units
  double delta_2 = 0.0;  // two-photon detuning
  Direction direction = Direction::Forward;
  double rabi_p = 1e-3;  // weak probe; unused by the closed form
};

struct CouplingParams {
  double rabi_c = 2.5;   // effective coupling Rabi frequency, Gamma units
  double delta_c = 0.0;
};

struct MediumParams {
  double od = 19.0;
  double gamma_ge = 0.5;   // optical coherence decay, radiative limit Gamma/2
  double gamma_gs = 0.0;   // ground-state coherence decay
  double length_scale = 1.0;  // bookkeeping only; physics enters through od

  void validate() const {
    if (od < 0.0) throw std::domain_error("MediumParams: od < 0");
    if (gamma_ge <= 0.0) throw std::domain_error("MediumParams: gamma_ge <= 0");
    if (gamma_gs < 0.0) throw std::domain_error("MediumParams: gamma_gs < 0");
  }
};

/// Susceptibility in absorption-normalized units: on a bare two-level
/// resonance Im(chi) = 1/gamma_ge, so the transmission exponent is -od.
struct ChiResult {
  complexd chi{0.0, 0.0};
};

namespace detail {

/// Population-weighted sum over the table's links. Paired links contribute
/// the EIT form 4 w (d2 + i ggs) / (|Oc_i|^2 - 4 (d2 + i ggs)(dp + i gge));
/// an orphan link contributes the bare two-level term -w / (dp + i gge).
inline complexd chi_of_table(const TransitionTable& table, double delta_p, double delta_2,
                             const CouplingParams& coupling, const MediumParams& medium) {
  const complexd i1(0.0, 1.0);
  const complexd a = delta_2 + i1 * medium.gamma_gs;
  const complexd b = delta_p + i1 * medium.gamma_ge;
  complexd sum = 0.0;
  for (const auto& link : table.links) {
    if (link.has_coupling) {
      const double oc2 = coupling.rabi_c * coupling.rabi_c * link.coupling_scale;
      sum += 4.0 * link.weight * a / (oc2 - 4.0 * a * b);
    } else {
      sum += -link.weight / b;
    }
  }
  return sum / static_cast<double>(table.atom.ground_sublevels());
}

}  // namespace detail

inline ChiResult chi_forward(const ProbeParams& probe, const CouplingParams& coupling,
                             const MediumParams& medium, const TransitionTable& table) {
  if (probe.direction != Direction::Forward || table.direction != Direction::Forward)
    throw std::domain_error("chi_forward: direction mismatch");
  medium.validate();
  return {detail::chi_of_table(table, probe.delta_p, probe.delta_2, coupling, medium)};
}

inline ChiResult chi_backward(const ProbeParams& probe, const CouplingParams& coupling,
                              const MediumParams& medium, const TransitionTable& table) {
  if (probe.direction != Direction::Backward || table.direction != Direction::Backward)
    throw std::domain_error("chi_backward: direction mismatch");
  medium.validate();
  return {detail::chi_of_table(table, probe.delta_p, probe.delta_2, coupling, medium)};
}

inline ChiResult chi_closed_form(Direction direction, const ProbeParams& probe,
                                 const CouplingParams& coupling, const MediumParams& medium,
                                 const TransitionTable& table) {
  return direction == Direction::Forward ? chi_forward(probe, coupling, medium, table)
                                         : chi_backward(probe, coupling, medium, table);
}

/// T = exp(-od * gamma_ge * Im chi); equals exp(-od) on a bare two-level
/// resonance and 1 for an empty medium.
inline double transmission(const ChiResult& chi, const MediumParams& medium) {
  return std::exp(-medium.od * medium.gamma_ge * chi.chi.imag());
}

/// Complex amplitude transfer across the medium: |t|^2 = transmission.
inline complexd amplitude_transfer(const ChiResult& chi, const MediumParams& medium) {
  const complexd i1(0.0, 1.0);
  return std::exp(i1 * 0.5 * medium.od * medium.gamma_ge * chi.chi);
}

struct SpectrumRow {
  double delta_p = 0.0;
  double transmission = 1.0;
  complexd chi{0.0, 0.0};
};

struct SpectrumTable {
  std::vector<SpectrumRow> rows;
};

/// Detuning scan with the coupling on resonance, so delta_2 = delta_p.
inline SpectrumTable scan_spectrum(Direction direction, const std::vector<double>& grid,
                                   const CouplingParams& coupling, const MediumParams& medium,
                                   const TransitionTable& table) {
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (grid[k] <= grid[k - 1]) throw std::domain_error("scan_spectrum: grid not increasing");
  SpectrumTable out;
  out.rows.reserve(grid.size());
  for (double dp : grid) {
    ChiResult chi{detail::chi_of_table(table, dp, dp, coupling, medium)};
    out.rows.push_back({dp, transmission(chi, medium), chi.chi});
  }
  return out;
}

/// Contrast eta = (CC_fw - CC_bw) / (CC_fw + CC_bw).
inline double contrast_eta(double cc_fw, double cc_bw) {
  if (cc_fw < 0.0 || cc_bw < 0.0) throw std::domain_error("contrast_eta: negative counts");
  const double total = cc_fw + cc_bw;
  if (total <= 0.0) throw std::domain_error("contrast_eta: both counts zero");
  return (cc_fw - cc_bw) / total;
}

struct IsolationResult {
  double db = 0.0;
  bool infinite = false;  // set when cc_bw = 0
};

/// Isolation I = 10 log10(CC_in / CC_bw).
inline IsolationResult isolation_db(double cc_in, double cc_bw) {
  if (cc_in <= 0.0) throw std::domain_error("isolation_db: cc_in must be positive");
  if (cc_bw < 0.0) throw std::domain_error("isolation_db: negative cc_bw");
  if (cc_bw == 0.0) return {std::numeric_limits<double>::infinity(), true};
  return {10.0 * std::log10(cc_in / cc_bw), false};
}

/// Spectral intensity profile of the probe wave packet, used for
/// pulse-integrated transmissions. Bandwidth is the FWHM of |S(w)|^2.
struct SpectralProfile {
  enum class Shape { Gaussian, ExpDecay };
  Shape shape = Shape::ExpDecay;
  double bandwidth = 0.278;  // Gamma units

  double density(double omega) const {
    if (shape == Shape::Gaussian) {
      const double sigma = std::sqrt(2.0 * std::log(2.0)) / bandwidth;
      return std::exp(-2.0 * sigma * sigma * omega * omega);
    }
    const double hw = 0.5 * bandwidth;
    return 1.0 / (omega * omega + hw * hw);
  }
};

/// Energy-weighted transmission of a wave packet with the given spectrum,
/// integrated over [-window, +window] around resonance.
inline double pulse_averaged_transmission(const TransitionTable& table,
                                          const CouplingParams& coupling,
                                          const MediumParams& medium,
                                          const SpectralProfile& profile,
                                          double window = 25.0 / kGammaMHz,
                                          int n_points = 2001) {
  if (window <= 0.0 || n_points < 3) throw std::domain_error("bad spectral window");
  double num = 0.0, den = 0.0;
  const double dw = 2.0 * window / (n_points - 1);
  for (int k = 0; k < n_points; ++k) {
    const double w = -window + k * dw;
    const double rho = profile.density(w);
    const double trap = (k == 0 || k == n_points - 1) ? 0.5 : 1.0;
    ChiResult chi{detail::chi_of_table(table, w, w, coupling, medium)};
    num += trap * rho * transmission(chi, medium);
    den += trap * rho;
  }
  return num / den;
}

struct OdScanRow {
  double od = 0.0;
  double t_fw = 1.0;
  double t_bw = 1.0;
  double eta = 0.0;
};

/// Per-OD transmissions and contrast. When a spectral profile is supplied the
/// transmissions are pulse-integrated; otherwise they are resonant values.
inline std::vector<OdScanRow> scan_od(const std::vector<double>& od_grid,
                                      const CouplingParams& coupling,
                                      const MediumParams& medium_template,
                                      const TransitionTable& fw_table,
                                      const TransitionTable& bw_table,
                                      const SpectralProfile* profile = nullptr) {
  std::vector<OdScanRow> out;
  out.reserve(od_grid.size());
  for (double od : od_grid) {
    if (od < 0.0) throw std::domain_error("scan_od: od < 0");
    MediumParams medium = medium_template;
    medium.od = od;
    double t_fw, t_bw;
    if (profile) {
      t_fw = pulse_averaged_transmission(fw_table, coupling, medium, *profile);
      t_bw = pulse_averaged_transmission(bw_table, coupling, medium, *profile);
    } else {
      t_fw = transmission({detail::chi_of_table(fw_table, 0.0, 0.0, coupling, medium)}, medium);
      t_bw = transmission({detail::chi_of_table(bw_table, 0.0, 0.0, coupling, medium)}, medium);
    }
    out.push_back({od, t_fw, t_bw, contrast_eta(t_fw, t_bw)});
  }
  return out;
}

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Root-finds gamma_gs such that the forward resonant transmission equals
/// the target (e.g. 0.929 at od = 19, Omega_c = 2.5 Gamma).
inline double calibrate_gamma_gs(double target_t_fw, double od, double rabi_c,
                                 const TransitionTable& fw_table, double gamma_ge = 0.5) {
  if (target_t_fw <= 0.0 || target_t_fw > 1.0)
    throw std::domain_error("calibrate_gamma_gs: target must be in (0, 1]");
  if (target_t_fw == 1.0) return 0.0;
  CouplingParams coupling{rabi_c, 0.0};
  auto t_of = [&](double ggs) {
    MediumParams m{od, gamma_ge, ggs, 1.0};
    return transmission({detail::chi_of_table(fw_table, 0.0, 0.0, coupling, m)}, m);
  };
  double lo = 0.0, hi = 1.0;  // search gamma_gs in (0, Gamma)
  if (t_of(hi) > target_t_fw)
    throw CalibrationError("calibrate_gamma_gs: no root in (0, Gamma)");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (t_of(mid) > target_t_fw) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace nreit
