// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. All physics runs in Gamma units with the default atom.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <vector>

#include "nreit/coincidence.hpp"
#include "nreit/config.hpp"
#include "nreit/master_equation.hpp"
#include "nreit/qubit.hpp"
#include "nreit/storage.hpp"
#include "nreit/susceptibility.hpp"
#include "nreit/tomography.hpp"

using namespace nreit;

namespace {

int g_failures = 0;

void report(int id, const char* what, bool ok, const std::string& detail = "") {
  std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", id, what,
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

double now_s() {
  using clock = std::chrono::steady_clock;
  static const auto t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

const AtomSpec kAtom;

}  // namespace

int main() {
  const TransitionTable fw = make_table(kAtom, Direction::Forward);
  const TransitionTable bw = make_table(kAtom, Direction::Backward);
  const CouplingParams coupling{2.5, 0.0};
  const double gamma_gs = calibrate_gamma_gs(0.929, 19.0, 2.5, fw);
  const MediumParams medium{19.0, 0.5, gamma_gs, 1.0};

  // 1. closed form vs steady-state oracle, 41-point grid, both directions
  {
    const double t_start = now_s();
    double worst = 0.0;
    for (auto dir : {Direction::Forward, Direction::Backward}) {
      const TransitionTable& table = dir == Direction::Forward ? fw : bw;
      for (int k = 0; k <= 40; ++k) {
        ProbeParams probe;
        probe.delta_p = -4.0 + 0.2 * k;
        probe.delta_2 = probe.delta_p;
        probe.direction = dir;
        auto oracle = chi_oracle(dir, probe, coupling, medium, kAtom);
        auto closed = chi_closed_form(dir, probe, coupling, medium, table);
        worst = std::max(worst, std::abs(closed.chi - oracle.chi) / std::abs(oracle.chi));
      }
    }
    const double elapsed = now_s() - t_start;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max rel err %.2e, %.2f s", worst, elapsed);
    report(1, "closed-form chi matches steady-state oracle to 1e-6", worst <= 1e-6 && elapsed < 10.0,
           buf);
  }

  // 2. calibrated forward resonant transmission
  {
    ProbeParams probe;  // resonance
    auto chi = chi_forward(probe, coupling, medium, fw);
    const double t_fw = transmission(chi, medium);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "T_fw %.4f, gamma_gs %.5f Gamma", t_fw, gamma_gs);
    report(2, "forward resonant transmission 0.929 +- 0.005 with physical gamma_gs",
           std::abs(t_fw - 0.929) <= 0.005 && gamma_gs > 0.0 && gamma_gs < 0.05, buf);
  }

  // 3. backward suppression and pulse-integrated isolation
  {
    ProbeParams probe;
    probe.direction = Direction::Backward;
    const double t_bw_res = transmission(chi_backward(probe, coupling, medium, bw), medium);
    SpectralProfile profile{SpectralProfile::Shape::ExpDecay, mhz_to_gamma(1.60)};
    const double cc_bw = pulse_averaged_transmission(bw, coupling, medium, profile);
    auto iso = isolation_db(1.0, cc_bw);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "T_bw(res) %.2e, pulse T_bw %.4f, isolation %.1f dB",
                  t_bw_res, cc_bw, iso.db);
    report(3, "backward transmission <= 0.04 and isolation >= 14.0 dB",
           t_bw_res <= 0.04 && cc_bw <= 0.04 && iso.db >= 14.0, buf);
  }

  // 4. contrast value at od=19, zero at od=0, monotone over {0,2,...,30}
  {
    SpectralProfile profile{SpectralProfile::Shape::ExpDecay, mhz_to_gamma(1.60)};
    std::vector<double> ods;
    for (int k = 0; k <= 15; ++k) ods.push_back(2.0 * k);
    auto rows = scan_od(ods, coupling, medium, fw, bw, &profile);
    bool monotone = true;
    double eta19 = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k > 0 && rows[k].eta < rows[k - 1].eta - 1e-12) monotone = false;
    }
    {
      MediumParams m19 = medium;
      const double t_f = pulse_averaged_transmission(fw, coupling, m19, profile);
      const double t_b = pulse_averaged_transmission(bw, coupling, m19, profile);
      eta19 = contrast_eta(t_f, t_b);
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "eta(19) %.4f, eta(0) %.1e, monotone %s", eta19,
                  rows[0].eta, monotone ? "yes" : "no");
    report(4, "pulse-integrated contrast 0.96 +- 0.03, zero at od=0, monotone in od",
           std::abs(eta19 - 0.96) <= 0.03 && std::abs(rows[0].eta) <= 1e-9 && monotone, buf);
  }

  // 5. dual-rail qubit channel: state-independent contrast, unit forward fidelity
  {
    SpectralProfile profile{SpectralProfile::Shape::ExpDecay, mhz_to_gamma(1.60)};
    const double t_f = pulse_averaged_transmission(fw, coupling, medium, profile);
    const double t_b = pulse_averaged_transmission(bw, coupling, medium, profile);
    bool ok = true;
    double eta_first = 0.0;
    std::vector<QubitState> states{state_h(), state_v(), state_r(), state_d()};
    for (std::size_t k = 0; k < states.size(); ++k) {
      // both rails see the same direction-dependent transmission
      const double eta = contrast_eta(t_f, t_b);
      if (k == 0) eta_first = eta;
      if (std::abs(eta - eta_first) > 1e-12) ok = false;
      if (eta < 0.93 || eta > 0.99) ok = false;
      auto out = nraq_apply(states[k], Direction::Forward, coupling, medium, fw);
      auto rec = reconstruct(expected_counts(out.rho_out, 1e6));
      if (fidelity(rec.rho, states[k]) < 0.99) ok = false;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "eta %.4f for H,V,R,D", eta_first);
    report(5, "qubit contrast state-independent in [0.93, 0.99], forward fidelity >= 0.99", ok,
           buf);
  }

  // 6. tomography round trip, MC scaling, physicality
  {
    bool ok = true;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
      QubitState in = make_pure(std::acos(2.0 * u(rng) - 1.0), 2.0 * M_PI * u(rng));
      auto rec = reconstruct(expected_counts(in, 1e6));
      if ((rec.rho.rho - in.rho).norm() > 1e-12) ok = false;
      if (!rec.rho.is_physical()) ok = false;
    }
    std::vector<double> sigmas;
    for (double n : {1e3, 1e4, 1e5}) {
      auto mc = mc_uncertainty(expected_counts(state_d(), n), 400, state_d(), 31);
      sigmas.push_back(mc.sigma_fidelity);
    }
    for (std::size_t k = 1; k < sigmas.size(); ++k) {
      const double ratio = sigmas[k - 1] / sigmas[k];
      if (std::abs(ratio - std::sqrt(10.0)) > 0.15 * std::sqrt(10.0) * 2.0) ok = false;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "sigma(1e3,1e4,1e5) = %.2e %.2e %.2e", sigmas[0], sigmas[1],
                  sigmas[2]);
    report(6, "tomography round trip 1e-12; MC sigma ~ 1/sqrt(N); always physical", ok, buf);
  }

  // 7. storage efficiency, backward suppression, slow-light delay
  {
    const double t_start = now_s();
    auto pulse = make_pulse(mhz_to_gamma(1.60), PulseShape::Gaussian, 25.0,
                            uniform_grid(140.0, 0.02));
    auto timeline = make_timeline(pulse.t, 2.5, 30.0, 100.0, 2.0);
    MediumParams m54{54.0, 0.5, gamma_gs, 1.0};
    auto fw_store = simulate_eit_storage(pulse, timeline, m54, Direction::Forward, 256);
    auto bw_store = simulate_eit_storage(pulse, timeline, m54, Direction::Backward, 256);
    auto pulse2 = make_pulse(mhz_to_gamma(1.60), PulseShape::Gaussian, 25.0,
                             uniform_grid(80.0, 0.02));
    auto free_run = simulate_eit_storage(pulse2, constant_timeline(pulse2.t, 2.5), m54,
                                         Direction::Forward, 256);
    const double delay = free_run.output.peak_time() - pulse2.peak_time();
    const double delay_ref = 2.0 * m54.od * m54.gamma_ge / (2.5 * 2.5);
    const double elapsed = now_s() - t_start;
    const bool ok = fw_store.efficiency >= 0.05 && fw_store.efficiency <= 0.15 &&
                    bw_store.efficiency < 0.01 * fw_store.efficiency &&
                    std::abs(delay - delay_ref) <= 0.10 * delay_ref && elapsed < 60.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "eff %.3f, bw/fw %.2e, delay %.2f vs %.2f /Gamma, %.1f s",
                  fw_store.efficiency, bw_store.efficiency / fw_store.efficiency, delay,
                  delay_ref, elapsed);
    report(7, "storage efficiency in [0.05, 0.15]; backward < 1%; slow-light delay within 10%",
           ok, buf);
  }

  // 8. spectral shapes on the 2pi x (-18 .. +22) MHz grid
  {
    std::vector<double> grid;
    for (int k = 0; k <= 200; ++k)
      grid.push_back(mhz_to_gamma(-18.0 + 0.2 * k));
    auto fw_spec = scan_spectrum(Direction::Forward, grid, coupling, medium, fw);
    auto bw_spec = scan_spectrum(Direction::Backward, grid, coupling, medium, bw);
    // backward note: the exact multi-link model also produces Autler-Townes
    // side dips near +-Omega_c/2 that dip below the resonance line; the
    // resonance feature itself is the minimum of the central absorption line
    std::size_t fw_max = 0, bw_min = 0;
    double bw_min_t = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (fw_spec.rows[k].transmission > fw_spec.rows[fw_max].transmission) fw_max = k;
      if (std::abs(bw_spec.rows[k].delta_p) < mhz_to_gamma(3.0) &&
          bw_spec.rows[k].transmission < bw_min_t) {
        bw_min_t = bw_spec.rows[k].transmission;
        bw_min = k;
      }
    }
    const double fw_pos = gamma_to_mhz(fw_spec.rows[fw_max].delta_p);
    const double bw_pos = gamma_to_mhz(bw_spec.rows[bw_min].delta_p);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "fw max at %.2f MHz, bw central min at %.2f MHz (T %.1e)",
                  fw_pos, bw_pos, bw_min_t);
    report(8, "forward maximum and backward central absorption minimum at zero detuning",
           std::abs(fw_pos) <= 0.3 && std::abs(bw_pos) <= 0.3 && bw_min_t <= 0.04, buf);
  }

  // 9. coincidence pipeline: offset recovery, flatness, throughput
  {
    const double t_start = now_s();
    std::mt19937_64 rng(404);
    auto stream = generate_correlated_tags(2e4, 10.0, 8000, 0.6, 1e3, rng);
    auto hist = cross_correlate(stream, 1600, 200000);
    std::size_t peak = 0;
    for (std::size_t k = 0; k < hist.counts.size(); ++k)
      if (hist.counts[k] > hist.counts[peak]) peak = k;
    const bool offset_ok =
        hist.bin_left(peak) <= 8000 && hist.bin_left(peak) + hist.bin_width_ps > 8000;

    TimeTagStream flat_stream;
    flat_stream.s1 = generate_poisson_tags(5e4, 10.0, rng);
    flat_stream.s2 = generate_poisson_tags(5e4, 10.0, rng);
    const std::size_t n_tags = flat_stream.s1.size() + flat_stream.s2.size();
    auto flat = cross_correlate(flat_stream, 1600, 160000);
    double mean = 0.0;
    for (auto c : flat.counts) mean += static_cast<double>(c);
    mean /= flat.counts.size();
    bool flat_ok = true;
    for (auto c : flat.counts)
      if (std::abs(static_cast<double>(c) - mean) >= 5.0 * std::sqrt(mean)) flat_ok = false;
    const double elapsed = now_s() - t_start;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "peak bin left %lld ps, %zu tags, %.2f s",
                  static_cast<long long>(hist.bin_left(peak)), n_tags, elapsed);
    report(9, "offset bin recovered; uncorrelated histogram flat within 5 sigma; 1e6 tags < 5 s",
           offset_ok && flat_ok && n_tags > 900000 && elapsed < 5.0, buf);
  }

  if (g_failures == 0) {
    std::printf("acceptance: all 9 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return 1;
}
