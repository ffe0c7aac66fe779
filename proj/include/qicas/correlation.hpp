// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "qicas/errors.hpp"
#include "qicas/partition.hpp"
#include "qicas/rdm.hpp"

namespace qicas {

// Von Neumann entropy in nats from a probability spectrum. 0*ln(0) counts
// as 0; round-off negatives above -1e-10 are tolerated (treated as 0),
// anything lower is a positivity failure.
template <typename Sequence>
inline double entropy(const Sequence& lambda) {
  double s = 0.0;
  for (double l : lambda) {
    if (l < -1e-10) {
      throw positivity_error("entropy input eigenvalue below -1e-10");
    }
    if (l > 0.0) s -= l * std::log(l);
  }
  return s;
}

inline double entropy_of_density(const Eigen::MatrixXd& rho) {
  if (rho.rows() != rho.cols()) {
    throw dimension_error("density matrix must be square");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho);
  std::vector<double> lam(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  return entropy(lam);
}

inline double orbital_entropy(const SpinTracedRDMs& r, int i) {
  return entropy(orbital_spectrum(r, i).lambda);
}

struct EntropyProfile {
  std::vector<OrbitalSpectrum> spectra;
  std::vector<double> entropies;
  double total = 0.0;  // sum over all orbitals
};

inline EntropyProfile entropy_profile(const SpinTracedRDMs& r) {
  EntropyProfile p;
  p.spectra.reserve(r.d);
  p.entropies.reserve(r.d);
  for (int i = 0; i < r.d; ++i) {
    p.spectra.push_back(orbital_spectrum(r, i));
    p.entropies.push_back(entropy(p.spectra.back().lambda));
    p.total += p.entropies.back();
  }
  return p;
}

// Cost functional: summed single-orbital entropies of the non-active
// (closed + virtual) orbitals.
inline double f_qi(const SpinTracedRDMs& r, const CasPartition& part) {
  if (part.n_orbitals() != r.d) {
    throw dimension_error("partition does not match RDM dimension");
  }
  double f = 0.0;
  for (int i : part.closed) f += orbital_entropy(r, i);
  for (int i : part.virt) f += orbital_entropy(r, i);
  return f;
}

// Total-entropy variant: sum over every orbital.
inline double f_qi_all(const SpinTracedRDMs& r) {
  double f = 0.0;
  for (int i = 0; i < r.d; ++i) f += orbital_entropy(r, i);
  return f;
}

// Orbital-pair mutual information I_ij = S_i + S_j - S_ij, with the
// single-orbital entropies taken from partial traces of the joint matrix
// so all three terms share one computational path.
inline double mutual_information(const Wavefunction& psi, int i, int j) {
  const Eigen::MatrixXd rho = two_orbital_rdm(psi, i, j);
  Eigen::MatrixXd rho_i = Eigen::MatrixXd::Zero(4, 4);
  Eigen::MatrixXd rho_j = Eigen::MatrixXd::Zero(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        rho_i(a, b) += rho(a * 4 + c, b * 4 + c);
        rho_j(a, b) += rho(c * 4 + a, c * 4 + b);
      }
  return entropy_of_density(rho_i) + entropy_of_density(rho_j) -
         entropy_of_density(rho);
}

// Full symmetric mutual-information matrix with zero diagonal.
inline Eigen::MatrixXd mutual_information_matrix(const Wavefunction& psi) {
  const int d = psi.space.d;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      m(i, j) = mutual_information(psi, i, j);
      m(j, i) = m(i, j);
    }
  return m;
}

// Split of the non-active correlation into internal mutual information and
// active/non-active entanglement:
//   f_qi = i_n + e_an,  i_n = sum_{i in N} S_i - S(rho_N),  e_an = S(rho_N),
// with S(rho_N) evaluated independently through the subsystem density
// matrix of the non-active orbitals.
struct CorrelationSplit {
  double f_qi = 0.0;
  double i_n = 0.0;   // mutual information internal to the non-active set
  double e_an = 0.0;  // entanglement entropy between active and non-active
};

inline CorrelationSplit decompose_correlation(const Wavefunction& psi,
                                              const CasPartition& part) {
  std::vector<int> non_active = part.closed;
  non_active.insert(non_active.end(), part.virt.begin(), part.virt.end());
  std::sort(non_active.begin(), non_active.end());
  const SpinTracedRDMs r = compute_rdms(psi);
  CorrelationSplit out;
  out.f_qi = f_qi(r, part);
  // An empty environment carries no entanglement and no mutual information.
  out.e_an = non_active.empty()
                 ? 0.0
                 : entropy_of_density(subsystem_rdm(psi, non_active));
  out.i_n = out.f_qi - out.e_an;
  return out;
}

// Binary entropy B(x) = -x ln x - (1-x) ln(1-x) and its inverse on the
// increasing branch x in [0, 1/2], solved by bisection.
inline double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) throw domain_error("binary_entropy needs x in [0,1]");
  double s = 0.0;
  if (x > 0.0) s -= x * std::log(x);
  if (x < 1.0) s -= (1.0 - x) * std::log(1.0 - x);
  return s;
}

inline double binary_entropy_inverse(double y) {
  const double ln2 = std::log(2.0);
  if (y < 0.0 || y > ln2 + 1e-15) {
    throw domain_error("binary_entropy_inverse needs y in [0, ln 2]");
  }
  if (y <= 0.0) return 0.0;
  if (y >= ln2) return 0.5;
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (binary_entropy(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-14) break;
  }
  return 0.5 * (lo + hi);
}

// Number of orbitals whose entropy exceeds each threshold fraction of the
// maximum entropy. Default grid: 1% to 50% of max in 1% steps.
struct ThresholdDiagram {
  std::vector<double> thresholds;  // fractions of the maximum entropy
  std::vector<int> counts;
};

inline std::vector<double> default_threshold_grid() {
  std::vector<double> t;
  for (int k = 1; k <= 50; ++k) t.push_back(0.01 * k);
  return t;
}

inline ThresholdDiagram threshold_diagram(
    const std::vector<double>& entropies,
    const std::vector<double>& thresholds = default_threshold_grid()) {
  ThresholdDiagram d;
  d.thresholds = thresholds;
  const double smax =
      entropies.empty() ? 0.0
                        : *std::max_element(entropies.begin(), entropies.end());
  d.counts.reserve(thresholds.size());
  for (double t : thresholds) {
    int n = 0;
    for (double s : entropies) {
      if (s > t * smax) ++n;
    }
    d.counts.push_back(n);
  }
  return d;
}

// Plateau rule for the active-space size: scan the diagram for maximal runs
// of a constant count c with 0 < c < D; the first run at least `min_run`
// thresholds long fixes the suggestion. No such run is an error, not a
// silent guess.
inline int suggest_cas_size(const ThresholdDiagram& diagram, int d_total,
                            int min_run = 5) {
  const auto& c = diagram.counts;
  std::size_t i = 0;
  while (i < c.size()) {
    std::size_t j = i;
    while (j + 1 < c.size() && c[j + 1] == c[i]) ++j;
    const int run = static_cast<int>(j - i + 1);
    if (c[i] > 0 && c[i] < d_total && run >= min_run) return c[i];
    i = j + 1;
  }
  throw plateau_error("threshold diagram has no admissible plateau");
}

}  // namespace qicas
