// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "qicas/casci.hpp"
#include "qicas/correlation.hpp"
#include "qicas/errors.hpp"
#include "qicas/fci.hpp"
#include "qicas/hamiltonian.hpp"
#include "qicas/optimizer.hpp"
#include "qicas/partition.hpp"
#include "qicas/rdm.hpp"
#include "qicas/rotation.hpp"

namespace qicas {

// Energy-error bound data for one basis. With dE = E_CASCI - E_FCI,
// dE' the Rayleigh-quotient error of the projected-renormalized ground
// state, eps the projection leakage, and dE_max the sector spectral spread,
// the chain reads
//   (a) dE <= dE'      (b) dE' <= dE_max * eps
//   (c) f_qi >= ln(4) * eps   when eps < 1/2
//   (d) dE <= dE_max / ln(4) * f_qi
// Inequalities carry a 1e-9 slack when flagged; (c) and (d) are vacuous for
// eps >= 1/2. `tight_rhs` is the optional sharper right-hand side
// dE_max * Binv(f_qi) (binary-entropy inverse), NaN when out of domain.
struct BoundReport {
  double e_fci = 0.0;
  double e_casci = 0.0;
  double delta_e = 0.0;
  double delta_e_prime = 0.0;
  double delta_e_max = 0.0;
  double epsilon = 0.0;
  double f_qi = 0.0;
  double k_factor = 0.0;    // delta_e_max / ln 4
  double bound_rhs = 0.0;   // k_factor * f_qi
  double tight_rhs = std::numeric_limits<double>::quiet_NaN();
  bool epsilon_lt_half = false;
  bool holds_a = false;
  bool holds_b = false;
  bool holds_c = false;     // vacuously true when eps >= 1/2
  bool holds_d = false;
  bool chain_holds = false;
};

inline BoundReport verify_bound(const MolecularHamiltonian& h,
                                const Eigen::MatrixXd& u,
                                const CasPartition& part,
                                const SolverOptions& opts = {}) {
  constexpr double kSlack = 1e-9;
  const MolecularHamiltonian rotated = transform_integrals(h, u);
  const GroundState gs = ground_state(rotated, opts);
  const SpectralBounds bounds = spectral_bounds(rotated, opts);

  BoundReport r;
  r.e_fci = gs.energy;
  r.delta_e_max = bounds.e_max - bounds.e_min;

  const CasciResult cas = casci_energy(rotated, part, opts);
  r.e_casci = cas.e_total;
  r.delta_e = r.e_casci - r.e_fci;

  const ProjectionResult proj = project_cas(gs.psi, part);
  r.epsilon = proj.epsilon;
  const Eigen::VectorXd hpsi = apply_hamiltonian(rotated, proj.psi);
  r.delta_e_prime = proj.psi.coeffs.dot(hpsi) - r.e_fci;

  const SpinTracedRDMs rdms = compute_rdms(gs.psi);
  r.f_qi = f_qi(rdms, part);

  const double ln4 = std::log(4.0);
  r.k_factor = r.delta_e_max / ln4;
  r.bound_rhs = r.k_factor * r.f_qi;
  r.epsilon_lt_half = r.epsilon < 0.5;

  r.holds_a = r.delta_e <= r.delta_e_prime + kSlack;
  r.holds_b = r.delta_e_prime <= r.delta_e_max * r.epsilon + kSlack;
  r.holds_c = !r.epsilon_lt_half || r.f_qi >= ln4 * r.epsilon - kSlack;
  r.holds_d = !r.epsilon_lt_half || r.delta_e <= r.bound_rhs + kSlack;
  r.chain_holds = r.holds_a && r.holds_b && r.holds_c && r.holds_d;

  if (r.epsilon_lt_half && r.f_qi <= std::log(2.0)) {
    r.tight_rhs = r.delta_e_max * binary_entropy_inverse(r.f_qi);
  }
  return r;
}

// Sample correlation coefficient; degenerate inputs (zero variance) yield 0.
inline double pearson(const std::vector<double>& x,
                      const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw dimension_error("pearson needs two equal-length samples, n >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

struct ScanSample {
  double f_qi = 0.0;
  double e_casci = 0.0;
  std::uint64_t seed = 0;
};

// Correlate cost against CASCI energy over seeded perturbations of a center
// basis. The full-system ground state is solved once in the input basis;
// every sample rotates its reduced density matrices and refolds the CASCI
// problem. Samples come back sorted by ascending cost. Sample k uses the
// derived seed mix(seed, k), so any prefix of a longer scan is reproducible.
inline std::vector<ScanSample> scan_random_bases(
    const MolecularHamiltonian& h, const CasPartition& part,
    const Eigen::MatrixXd& center, int n_samples, double scale,
    std::uint64_t seed, const SolverOptions& opts = {}, int jobs = 1) {
  if (n_samples < 1) throw domain_error("scan needs at least one sample");
  if (center.rows() != h.n_orbitals() || center.cols() != h.n_orbitals()) {
    throw dimension_error("scan center basis has wrong dimensions");
  }
  const GroundState gs = ground_state(h, opts);
  const SpinTracedRDMs rdms = compute_rdms(gs.psi);

  std::vector<ScanSample> samples(static_cast<std::size_t>(n_samples));
  auto run_range = [&](int lo, int hi) {
    for (int k = lo; k < hi; ++k) {
      const std::uint64_t sk = detail::mix_seed(seed, static_cast<std::uint64_t>(k));
      const Eigen::MatrixXd u = random_perturbation(center, scale, sk);
      ScanSample& s = samples[static_cast<std::size_t>(k)];
      s.seed = sk;
      s.f_qi = f_qi(rotate_rdms(rdms, u), part);
      s.e_casci = casci_energy(h, u, part, opts).e_total;
    }
  };
  const int threads = std::max(1, std::min(jobs, n_samples));
  if (threads == 1) {
    run_range(0, n_samples);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (n_samples + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int lo = t * chunk, hi = std::min(n_samples, lo + chunk);
      if (lo < hi) pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  std::stable_sort(samples.begin(), samples.end(),
                   [](const ScanSample& a, const ScanSample& b) {
                     return a.f_qi < b.f_qi;
                   });
  return samples;
}

}  // namespace qicas
