#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "nreit/atomic.hpp"
#include "nreit/susceptibility.hpp"

namespace nreit {

struct OracleResult {
  complexd chi{0.0, 0.0};
  bool probe_strong_warning = false;
};

/// Steady-state master-equation evaluation of the susceptibility over the
/// full Zeeman structure. The probe-free medium is stationary with the
/// ground manifold uniformly populated, so the weak-probe steady state is
/// obtained by a direct linear solve for the first-order g-e and g-s
/// coherences: each ground-sublevel row of the density matrix closes on the
/// excited/storage columns under the coupling Hamiltonian and the coherence
/// decay rates (gamma_ge on optical, gamma_gs on ground-state coherences).
/// chi is assembled from the g-e coherences, dipole-weighted and divided by
/// the probe Rabi frequency, in the same absorption-normalized units as the
/// closed form.
inline OracleResult chi_oracle(Direction direction, const ProbeParams& probe,
                               const CouplingParams& coupling, const MediumParams& medium,
                               const AtomSpec& atom) {
  atom.validate();
  medium.validate();
  if (probe.rabi_p <= 0.0) throw std::domain_error("chi_oracle: rabi_p must be positive");
  OracleResult result;
  result.probe_strong_warning = probe.rabi_p > 0.01;

  const int n_e = atom.excited_sublevels();
  const int q = (direction == Direction::Forward) ? +1 : -1;
  const complexd i1(0.0, 1.0);

  // storage sublevels that actually couple to an existing excited state;
  // uncoupled ones would add zero rows (singular at delta_2 = gamma_gs = 0)
  std::vector<int> s_levels;
  for (int m = -atom.f_s; m <= atom.f_s; ++m)
    if (std::abs(m + 1) <= atom.f_e && cg_weight(atom.f_s, m, +1, atom.f_e, m + 1) > 0.0)
      s_levels.push_back(m);
  const int n_exc = n_e + static_cast<int>(s_levels.size());  // excited + storage columns

  const double population = 1.0 / atom.ground_sublevels();
  const double c_ref = detail::mean_forward_coupling_cg(atom);
  // probe dipole normalization: mean forward squared CG maps to weight 1
  double fw_sum = 0.0;
  for (int i = -atom.f_g; i <= atom.f_g; ++i)
    if (std::abs(i + 1) <= atom.f_e) fw_sum += cg_weight(atom.f_g, i, +1, atom.f_e, i + 1);
  const double probe_norm = fw_sum / atom.ground_sublevels();

  auto e_index = [&](int m) { return m + atom.f_e; };
  auto s_index = [&](int m) {
    for (std::size_t k = 0; k < s_levels.size(); ++k)
      if (s_levels[k] == m) return n_e + static_cast<int>(k);
    throw std::logic_error("chi_oracle: uncoupled storage sublevel referenced");
  };

  // Hamiltonian on the excited/storage block (hbar = 1, rotating frame):
  // diagonal detunings plus the sigma+ coupling links e_{m+1} <-> s_m
  Eigen::MatrixXcd h_exc = Eigen::MatrixXcd::Zero(n_exc, n_exc);
  for (int m = -atom.f_e; m <= atom.f_e; ++m)
    h_exc(e_index(m), e_index(m)) = -probe.delta_p;
  for (int m_s : s_levels) {
    const int m_e = m_s + 1;
    h_exc(s_index(m_s), s_index(m_s)) = -probe.delta_2;
    const double c = cg_weight(atom.f_s, m_s, +1, atom.f_e, m_e);
    const double omega_c = coupling.rabi_c * std::sqrt(c / c_ref);
    h_exc(e_index(m_e), s_index(m_s)) += -0.5 * omega_c;
    h_exc(s_index(m_s), e_index(m_e)) += -0.5 * omega_c;
  }

  // coherence decay per column
  Eigen::VectorXd gamma_col(n_exc);
  for (int m = -atom.f_e; m <= atom.f_e; ++m) gamma_col(e_index(m)) = medium.gamma_ge;
  for (int m : s_levels) gamma_col(s_index(m)) = medium.gamma_gs;

  // steady state per ground row: x (i H - diag(gamma)) = -i * p * Hp_row
  Eigen::MatrixXcd system = (i1 * h_exc).transpose();
  system -= gamma_col.cast<complexd>().asDiagonal();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(system);
  if (!lu.isInvertible())
    throw std::runtime_error("chi_oracle: singular steady-state system (check gamma_ge > 0)");

  complexd chi = 0.0;
  for (int i = -atom.f_g; i <= atom.f_g; ++i) {
    const int m_e = i + q;
    if (std::abs(m_e) > atom.f_e) continue;
    const double w = cg_weight(atom.f_g, i, q, atom.f_e, m_e) / probe_norm;
    if (w <= 0.0) continue;
    const double mu_rel = std::sqrt(w);
    const double omega_p = probe.rabi_p * mu_rel;
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n_exc);
    rhs(e_index(m_e)) = -i1 * population * (-0.5 * omega_p);
    Eigen::VectorXcd row = lu.solve(rhs);
    // chi contribution from rho_{e, g_i} = conj(rho_{g_i, e})
    chi += 2.0 * mu_rel * std::conj(row(e_index(m_e))) / probe.rabi_p;
  }
  result.chi = chi;
  return result;
}

}  // namespace nreit
