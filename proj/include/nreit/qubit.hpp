#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "nreit/susceptibility.hpp"

namespace nreit {

/// Polarization qubit density matrix in the {H, V} basis.
struct QubitState {
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Identity() * 0.5;

  bool is_physical(double tol = 1e-9) const {
    if ((rho - rho.adjoint()).norm() > tol) return false;
    if (std::abs(rho.trace().real() - 1.0) > tol) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho);
    return es.eigenvalues().minCoeff() > -tol;
  }
};

/// |psi> = cos(theta/2)|H> + e^{i phi} sin(theta/2)|V>.
inline QubitState make_pure(double theta, double phi) {
  Eigen::Vector2cd psi;
  psi << std::cos(theta / 2.0), std::exp(complexd(0.0, phi)) * std::sin(theta / 2.0);
  return {psi * psi.adjoint()};
}

inline QubitState state_h() { return make_pure(0.0, 0.0); }
inline QubitState state_v() { return make_pure(M_PI, 0.0); }
inline QubitState state_d() { return make_pure(M_PI / 2.0, 0.0); }
// |R> = (|H> - i|V>)/sqrt(2)
inline QubitState state_r() { return make_pure(M_PI / 2.0, -M_PI / 2.0); }

/// Uhlmann fidelity F = Tr(sqrt(sqrt(rho) sigma sqrt(rho)))^2. For qubits
/// this reduces to Tr(rho sigma) + 2 sqrt(det rho det sigma).
inline double fidelity(const QubitState& a, const QubitState& b) {
  if (!a.is_physical() || !b.is_physical())
    throw std::domain_error("fidelity: input is not a density matrix");
  const double tr = (a.rho * b.rho).trace().real();
  const double da = std::max(0.0, a.rho.determinant().real());
  const double db = std::max(0.0, b.rho.determinant().real());
  return std::clamp(tr + 2.0 * std::sqrt(da * db), 0.0, 1.0);
}

struct ChannelResult {
  double transmission = 1.0;
  QubitState rho_out;
  bool isolated = false;   // total absorption; rho_out undefined
  complexd t_left{1.0, 0.0};
  complexd t_right{1.0, 0.0};
};

/// Applies the dual-rail non-reciprocal apparatus to a polarization qubit.
/// The H component travels rail L and the V component rail R; both rails are
/// converted to the same circular polarization before the medium, so each
/// acquires the identical complex amplitude t for the given direction. The
/// recombiner applies diag(t_L, t_R e^{i phi_LR}). rail_loss is a common
/// extra amplitude per rail (optics losses); rail_imbalance multiplies the
/// R-rail amplitude to model imperfect rail balance.
inline ChannelResult nraq_apply_amplitude(const QubitState& state, complexd t,
                                          double phase_lr = 0.0, double rail_loss = 1.0,
                                          double rail_imbalance = 1.0) {
  if (!state.is_physical()) throw std::domain_error("nraq_apply: invalid input state");
  ChannelResult out;
  out.t_left = t * rail_loss;
  out.t_right = t * rail_loss * rail_imbalance * std::exp(complexd(0.0, phase_lr));
  Eigen::Matrix2cd k = Eigen::Matrix2cd::Zero();
  k(0, 0) = out.t_left;
  k(1, 1) = out.t_right;
  Eigen::Matrix2cd raw = k * state.rho * k.adjoint();
  out.transmission = raw.trace().real();
  if (out.transmission < 1e-15) {
    out.isolated = true;
    return out;
  }
  out.rho_out.rho = raw / raw.trace();
  return out;
}

/// Convenience overload: rail amplitude from the resonant susceptibility.
inline ChannelResult nraq_apply(const QubitState& state, Direction direction,
                                const CouplingParams& coupling, const MediumParams& medium,
                                const TransitionTable& table, double phase_lr = 0.0) {
  if (table.direction != direction) throw std::domain_error("nraq_apply: table direction mismatch");
  ChiResult chi{detail::chi_of_table(table, 0.0, 0.0, coupling, medium)};
  return nraq_apply_amplitude(state, amplitude_transfer(chi, medium), phase_lr);
}

struct TransmissionRate {
  double value = 0.0;
  bool clipped = false;  // raw ratio exceeded 1 (statistical fluctuation)
};

/// T_fw = CC_fw / CC_in.
inline TransmissionRate transmission_rate(double cc_fw, double cc_in) {
  if (cc_in <= 0.0) throw std::domain_error("transmission_rate: cc_in must be positive");
  if (cc_fw < 0.0) throw std::domain_error("transmission_rate: negative counts");
  const double ratio = cc_fw / cc_in;
  if (ratio > 1.0) return {1.0, true};
  return {ratio, false};
}

}  // namespace nreit
