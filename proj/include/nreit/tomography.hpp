#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "nreit/qubit.hpp"

namespace nreit {

/// Projective counts onto |H>, |V>, |D> = (|H>+|V>)/sqrt(2) and the dual of
/// |R>, i.e. (|H>+i|V>)/sqrt(2). H and V share one total-count budget; D and
/// R are each measured against the same budget.
struct BasisCounts {
  double n_h = 0.0;
  double n_v = 0.0;
  double n_d = 0.0;
  double n_r = 0.0;

  void validate() const {
    if (n_h < 0 || n_v < 0 || n_d < 0 || n_r < 0)
      throw std::domain_error("BasisCounts: negative count");
  }
};

struct ReconResult {
  QubitState rho;
  bool psd_projected = false;
  std::optional<double> fidelity_vs_target;
  std::optional<double> sigma_fidelity;
};

/// Forward model: n_b = n_total <b|rho|b> per projection basis.
inline BasisCounts expected_counts(const QubitState& rho, double n_total) {
  if (n_total <= 0.0) throw std::domain_error("expected_counts: n_total must be positive");
  if (!rho.is_physical()) throw std::domain_error("expected_counts: invalid state");
  const auto& r = rho.rho;
  BasisCounts c;
  c.n_h = n_total * r(0, 0).real();
  c.n_v = n_total * r(1, 1).real();
  c.n_d = n_total * 0.5 * (1.0 + 2.0 * r(0, 1).real());
  // projector (|H>+i|V>)/sqrt(2): <p|rho|p> = (1 - 2 Im rho_HV)/2
  c.n_r = n_total * 0.5 * (1.0 - 2.0 * r(0, 1).imag());
  return c;
}

/// Stokes linear inversion followed by projection to the closest PSD
/// unit-trace matrix in Frobenius norm when an eigenvalue is negative.
inline ReconResult reconstruct(const BasisCounts& counts) {
  counts.validate();
  const double n_tot = counts.n_h + counts.n_v;
  if (n_tot <= 0.0) throw std::domain_error("reconstruct: n_H + n_V must be positive");
  const double s3 = (counts.n_h - counts.n_v) / n_tot;
  const double s1 = 2.0 * counts.n_d / n_tot - 1.0;
  const double s2 = 2.0 * counts.n_r / n_tot - 1.0;  // sign fixed by the R convention
  ReconResult out;
  Eigen::Matrix2cd& rho = out.rho.rho;
  rho(0, 0) = 0.5 * (1.0 + s3);
  rho(1, 1) = 0.5 * (1.0 - s3);
  rho(0, 1) = 0.5 * complexd(s1, -s2);
  rho(1, 0) = std::conj(rho(0, 1));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho);
  if (es.eigenvalues().minCoeff() < 0.0) {
    // 2x2 with unit trace: clipping the negative eigenvalue to zero and the
    // other to one is the Frobenius-nearest PSD unit-trace matrix
    Eigen::Vector2d lam = es.eigenvalues();
    int hi = lam(0) > lam(1) ? 0 : 1;
    Eigen::Vector2cd v = es.eigenvectors().col(hi);
    rho = v * v.adjoint();
    out.psd_projected = true;
  }
  return out;
}

struct McResult {
  double sigma_fidelity = 0.0;
  double mean_fidelity = 0.0;
  bool single_trial_warning = false;
};

/// Poisson Monte-Carlo error bar: resample each count with its observed mean,
/// reconstruct per trial, return the sample standard deviation of the
/// fidelity against the target state.
inline McResult mc_uncertainty(const BasisCounts& counts, int trials, const QubitState& target,
                               std::uint64_t seed = 1) {
  counts.validate();
  if (trials < 1) throw std::domain_error("mc_uncertainty: trials must be >= 1");
  std::mt19937_64 rng(seed);
  auto draw = [&](double mean) {
    if (mean <= 0.0) return 0.0;  // Poisson(0) stays 0
    std::poisson_distribution<long long> dist(mean);
    return static_cast<double>(dist(rng));
  };
  std::vector<double> fids;
  fids.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    BasisCounts sample;
    sample.n_h = draw(counts.n_h);
    sample.n_v = draw(counts.n_v);
    sample.n_d = draw(counts.n_d);
    sample.n_r = draw(counts.n_r);
    if (sample.n_h + sample.n_v <= 0.0) continue;  // degenerate resample, skip
    fids.push_back(fidelity(reconstruct(sample).rho, target));
  }
  McResult out;
  if (fids.empty()) return out;
  double mean = 0.0;
  for (double f : fids) mean += f;
  mean /= fids.size();
  out.mean_fidelity = mean;
  if (fids.size() < 2) {
    out.single_trial_warning = true;
    return out;
  }
  double var = 0.0;
  for (double f : fids) var += (f - mean) * (f - mean);
  out.sigma_fidelity = std::sqrt(var / (fids.size() - 1));
  return out;
}

}  // namespace nreit
