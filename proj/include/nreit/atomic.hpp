#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace nreit {

enum class Direction { Forward, Backward };
enum class Manifold { Ground, Storage, Excited };

/// The three hyperfine manifolds of the Lambda medium and the global
/// decay unit. Defaults match the 85Rb D1 configuration used throughout:
/// |g> = F=2, |s> = F=3, |e> = F'=3.
struct AtomSpec {
  int f_g = 2;
  int f_s = 3;
  int f_e = 3;
  double gamma = 1.0;  // excited-state decay, the global rate unit

  int ground_sublevels() const { return 2 * f_g + 1; }
  int storage_sublevels() const { return 2 * f_s + 1; }
  int excited_sublevels() const { return 2 * f_e + 1; }

  void validate() const {
    if (f_g < 0 || f_s < 0 || f_e < 0) throw std::domain_error("AtomSpec: F < 0");
    if (gamma <= 0.0) throw std::domain_error("AtomSpec: Gamma must be positive");
  }
};

struct ZeemanState {
  Manifold manifold = Manifold::Ground;
  int m = 0;
};

namespace detail {

inline double log_factorial(int n) {
  if (n < 0) throw std::domain_error("factorial of negative integer");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace detail

/// Squared Clebsch-Gordan coefficient |<F_g m_g; 1 q | F_e m_e>|^2 via the
/// Racah closed-form sum. Zero when the selection rule m_e = m_g + q fails.
inline double cg_weight(int f_g, int m_g, int q, int f_e, int m_e) {
  if (q < -1 || q > 1) throw std::domain_error("cg_weight: q must be in {-1,0,+1}");
  if (std::abs(m_g) > f_g || std::abs(m_e) > f_e)
    throw std::domain_error("cg_weight: |m| exceeds F");
  if (f_g < 0 || f_e < 0) throw std::domain_error("cg_weight: negative F");
  if (m_e != m_g + q) return 0.0;
  const int j1 = f_g, j2 = 1, j = f_e;
  if (j < std::abs(j1 - j2) || j > j1 + j2) return 0.0;

  using detail::log_factorial;
  const int m1 = m_g, m2 = q, m = m_e;
  // triangle coefficient and prefactor, in log space
  double log_pref = std::log(2.0 * j + 1.0)
      + log_factorial(j1 + j2 - j) + log_factorial(j1 - j2 + j) + log_factorial(-j1 + j2 + j)
      - log_factorial(j1 + j2 + j + 1)
      + log_factorial(j1 + m1) + log_factorial(j1 - m1)
      + log_factorial(j2 + m2) + log_factorial(j2 - m2)
      + log_factorial(j + m) + log_factorial(j - m);

  double sum = 0.0;
  const int k_lo = std::max({0, j2 - j - m1, j1 - j + m2});
  const int k_hi = std::min({j1 + j2 - j, j1 - m1, j2 + m2});
  for (int k = k_lo; k <= k_hi; ++k) {
    double log_term = log_factorial(k) + log_factorial(j1 + j2 - j - k)
        + log_factorial(j1 - m1 - k) + log_factorial(j2 + m2 - k)
        + log_factorial(j - j2 + m1 + k) + log_factorial(j - j1 - m2 + k);
    sum += ((k % 2 == 0) ? 1.0 : -1.0) * std::exp(-log_term);
  }
  const double cg = std::exp(0.5 * log_pref) * sum;
  return cg * cg;
}

/// One sigma+/- probe transition g -> e, with the matching coupling link
/// e <-> s when one exists. Weights are squared dipole factors; probe
/// weights are relative to the effective dipole after normalize_weights.
struct TransitionLink {
  ZeemanState ground;
  ZeemanState excited;
  int q = +1;                 // probe polarization index
  double weight = 0.0;        // squared relative probe dipole
  bool has_coupling = false;
  ZeemanState storage;        // valid only when has_coupling
  double coupling_scale = 1.0;  // |Omega_ci / Omega_c|^2 for this link
};

struct TransitionTable {
  AtomSpec atom;
  Direction direction = Direction::Forward;
  std::vector<TransitionLink> links;
  std::vector<std::size_t> orphans;  // indices into links with no coupling partner
  bool normalized = false;
};

namespace detail {

/// Mean squared coupling CG over the forward links; the reference against
/// which per-link coupling Rabi frequencies are scaled, so the quoted
/// effective Omega_c is a population-averaged value.
inline double mean_forward_coupling_cg(const AtomSpec& atom) {
  double sum = 0.0;
  int n = 0;
  for (int i = -atom.f_g; i <= atom.f_g; ++i) {
    if (std::abs(i) > atom.f_s || std::abs(i + 1) > atom.f_e) continue;
    sum += cg_weight(atom.f_s, i, +1, atom.f_e, i + 1);
    ++n;
  }
  if (n == 0 || sum <= 0.0) throw std::domain_error("no forward coupling links");
  return sum / n;
}

}  // namespace detail

/// Builds the direction-dependent probe/coupling link graph. Forward uses a
/// sigma+ probe g_i -> e_{i+1}, each excited state paired with the sigma+
/// coupling link e_{i+1} <-> s_i. Backward uses a sigma- probe g_i -> e_{i-1};
/// the stretched transition g_{-F} -> e_{-F-1} has no coupling partner.
inline TransitionTable build_transition_table(const AtomSpec& atom, Direction direction) {
  atom.validate();
  TransitionTable table;
  table.atom = atom;
  table.direction = direction;
  const int q = (direction == Direction::Forward) ? +1 : -1;
  const double c_ref = detail::mean_forward_coupling_cg(atom);

  for (int i = -atom.f_g; i <= atom.f_g; ++i) {
    const int m_e = i + q;
    if (std::abs(m_e) > atom.f_e) continue;
    TransitionLink link;
    link.ground = {Manifold::Ground, i};
    link.excited = {Manifold::Excited, m_e};
    link.q = q;
    link.weight = cg_weight(atom.f_g, i, q, atom.f_e, m_e);
    // coupling is sigma+ in both cases: e_m <-> s_{m-1}
    const int m_s = m_e - 1;
    if (std::abs(m_s) <= atom.f_s) {
      const double c = cg_weight(atom.f_s, m_s, +1, atom.f_e, m_e);
      if (c > 0.0) {
        link.has_coupling = true;
        link.storage = {Manifold::Storage, m_s};
        link.coupling_scale = c / c_ref;
      }
    }
    if (!link.has_coupling) table.orphans.push_back(table.links.size());
    table.links.push_back(link);
  }
  return table;
}

/// Rescales all probe weights by one common factor so the population-averaged
/// forward on-resonance absorption equals that of a two-level atom with the
/// effective dipole. The same factor (from the forward sigma+ weights) is used
/// for both directions, which makes the quoted OD directly usable in the
/// exponential transmission law.
inline TransitionTable normalize_weights(const TransitionTable& table) {
  if (table.links.empty()) throw std::domain_error("normalize_weights: empty table");
  const AtomSpec& atom = table.atom;
  double sum = 0.0;
  int n = 0;
  for (int i = -atom.f_g; i <= atom.f_g; ++i) {
    if (std::abs(i + 1) > atom.f_e) continue;
    sum += cg_weight(atom.f_g, i, +1, atom.f_e, i + 1);
    ++n;
  }
  if (sum <= 0.0) throw std::domain_error("normalize_weights: all-zero forward weights");
  bool any = false;
  for (const auto& link : table.links) any = any || link.weight > 0.0;
  if (!any) throw std::domain_error("normalize_weights: all-zero weights");
  if (table.normalized) return table;
  const double raw_mean = sum / atom.ground_sublevels();
  // weights may carry a uniform external scale; infer it from any nonzero
  // link against its bare CG value so normalization is scale invariant
  double external_scale = 0.0;
  for (const auto& link : table.links) {
    double cg = cg_weight(atom.f_g, link.ground.m, link.q, atom.f_e, link.excited.m);
    if (cg > 0.0 && link.weight > 0.0) {
      external_scale = link.weight / cg;
      break;
    }
  }
  if (external_scale <= 0.0) throw std::domain_error("normalize_weights: degenerate weights");
  TransitionTable out = table;
  for (auto& link : out.links) link.weight /= external_scale * raw_mean;
  out.normalized = true;
  return out;
}

/// Convenience: the normalized table for a direction.
inline TransitionTable make_table(const AtomSpec& atom, Direction direction) {
  return normalize_weights(build_transition_table(atom, direction));
}

}  // namespace nreit
