// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "qicas/determinant.hpp"
#include "qicas/errors.hpp"
#include "qicas/hamiltonian.hpp"
#include "qicas/partition.hpp"
#include "qicas/wavefunction.hpp"

namespace qicas {

namespace detail {

inline std::vector<int> bits_of(std::uint64_t mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

}  // namespace detail

// <K|H|K> per determinant, including the scalar core energy.
inline Eigen::VectorXd hamiltonian_diagonal(const MolecularHamiltonian& h,
                                            const DeterminantSpace& space) {
  const auto& h1 = h.h1();
  Eigen::VectorXd diag(space.size());
  const std::int64_t nb = static_cast<std::int64_t>(space.beta_strings.size());
  for (std::size_t ia = 0; ia < space.alpha_strings.size(); ++ia) {
    const auto aocc = detail::bits_of(space.alpha_strings[ia]);
    for (std::size_t ib = 0; ib < space.beta_strings.size(); ++ib) {
      const auto bocc = detail::bits_of(space.beta_strings[ib]);
      double e = h.e_core();
      for (int p : aocc) e += h1(p, p);
      for (int p : bocc) e += h1(p, p);
      for (int p : aocc)
        for (int q : aocc) e += 0.5 * (h.eri(p, p, q, q) - h.eri(p, q, q, p));
      for (int p : bocc)
        for (int q : bocc) e += 0.5 * (h.eri(p, p, q, q) - h.eri(p, q, q, p));
      for (int p : aocc)
        for (int q : bocc) e += h.eri(p, p, q, q);
      diag[static_cast<std::int64_t>(ia) * nb + ib] = e;
    }
  }
  return diag;
}

// Matrix-free sigma = H * v over the sector, Slater-Condon rules in
// chemists' notation. Same-spin excitation signs come from the string of
// that spin alone (alpha modes precede beta modes, and every excitation
// operator crosses the other spin block an even number of times).
inline Eigen::VectorXd apply_hamiltonian(const MolecularHamiltonian& h,
                                         const DeterminantSpace& space,
                                         const Eigen::VectorXd& v,
                                         const Eigen::VectorXd* diag_hint =
                                             nullptr) {
  if (v.size() != space.size()) {
    throw dimension_error("apply_hamiltonian: vector length mismatch");
  }
  const int d = space.d;
  const auto& h1 = h.h1();
  Eigen::VectorXd sigma = Eigen::VectorXd::Zero(v.size());

  // Diagonal part.
  if (diag_hint) {
    sigma.array() = diag_hint->array() * v.array();
  } else {
    const Eigen::VectorXd diag = hamiltonian_diagonal(h, space);
    sigma.array() = diag.array() * v.array();
  }

  const std::int64_t nb = static_cast<std::int64_t>(space.beta_strings.size());

  // One-spin single-excitation table entry: target string, sign, and the
  // effective one-electron part plus same-spin two-electron mean field.
  struct Single {
    std::int64_t rank;  // rank of the excited string
    int p, r;
    double sign;
  };
  auto build_singles = [&](const std::vector<std::uint64_t>& strings,
                           const std::unordered_map<std::uint64_t,
                                                    std::int64_t>& rank) {
    std::vector<std::vector<Single>> table(strings.size());
    for (std::size_t i = 0; i < strings.size(); ++i) {
      const std::uint64_t mask = strings[i];
      const auto occ = detail::bits_of(mask);
      for (int r : occ) {
        for (int p = 0; p < d; ++p) {
          if (p == r || (mask >> p) & 1ULL) continue;
          const std::uint64_t ex = (mask ^ (1ULL << r)) | (1ULL << p);
          table[i].push_back({rank.at(ex), p, r,
                              static_cast<double>(
                                  detail::excitation_sign(mask, p, r))});
        }
      }
    }
    return table;
  };
  const auto alpha_singles =
      build_singles(space.alpha_strings, space.alpha_rank);
  const auto beta_singles = build_singles(space.beta_strings, space.beta_rank);

  for (std::size_t ia = 0; ia < space.alpha_strings.size(); ++ia) {
    const std::uint64_t amask = space.alpha_strings[ia];
    const auto aocc = detail::bits_of(amask);
    for (std::size_t ib = 0; ib < space.beta_strings.size(); ++ib) {
      const std::int64_t k = static_cast<std::int64_t>(ia) * nb +
                             static_cast<std::int64_t>(ib);
      const double c = v[k];
      if (c == 0.0) continue;
      const std::uint64_t bmask = space.beta_strings[ib];
      const auto bocc = detail::bits_of(bmask);

      // Alpha singles: h_pr + sum_{q in occ_a} [(pr|qq)-(pq|qr)]
      //                + sum_{q in occ_b} (pr|qq).
      for (const Single& s : alpha_singles[ia]) {
        double val = h1(s.p, s.r);
        for (int q : aocc) {
          if (q == s.r) continue;
          val += h.eri(s.p, s.r, q, q) - h.eri(s.p, q, q, s.r);
        }
        for (int q : bocc) val += h.eri(s.p, s.r, q, q);
        sigma[s.rank * nb + static_cast<std::int64_t>(ib)] += s.sign * val * c;
      }
      // Beta singles.
      for (const Single& s : beta_singles[ib]) {
        double val = h1(s.p, s.r);
        for (int q : bocc) {
          if (q == s.r) continue;
          val += h.eri(s.p, s.r, q, q) - h.eri(s.p, q, q, s.r);
        }
        for (int q : aocc) val += h.eri(s.p, s.r, q, q);
        sigma[static_cast<std::int64_t>(ia) * nb + s.rank] += s.sign * val * c;
      }
      // Same-spin doubles, (r,s) -> (p,q) with r<s, p<q:
      // sign * [(pr|qs) - (ps|qr)]. Signs compose as two sequential singles
      // on the intermediate mask.
      auto same_spin_doubles = [&](const std::uint64_t mask,
                                   const std::vector<int>& occ, bool alpha) {
        for (std::size_t u1 = 0; u1 < occ.size(); ++u1) {
          for (std::size_t u2 = u1 + 1; u2 < occ.size(); ++u2) {
            const int r = occ[u1], s2 = occ[u2];
            for (int p = 0; p < d; ++p) {
              if ((mask >> p) & 1ULL) continue;
              for (int q = p + 1; q < d; ++q) {
                if ((mask >> q) & 1ULL) continue;
                const int sg1 = detail::excitation_sign(mask, p, r);
                const std::uint64_t m1 = (mask ^ (1ULL << r)) | (1ULL << p);
                const int sg2 = detail::excitation_sign(m1, q, s2);
                const std::uint64_t m2 = (m1 ^ (1ULL << s2)) | (1ULL << q);
                const double val =
                    sg1 * sg2 * (h.eri(p, r, q, s2) - h.eri(p, s2, q, r));
                if (val == 0.0) continue;
                if (alpha) {
                  sigma[space.alpha_rank.at(m2) * nb +
                        static_cast<std::int64_t>(ib)] += val * c;
                } else {
                  sigma[static_cast<std::int64_t>(ia) * nb +
                        space.beta_rank.at(m2)] += val * c;
                }
              }
            }
          }
        }
      };
      same_spin_doubles(amask, aocc, true);
      same_spin_doubles(bmask, bocc, false);
      // Opposite-spin doubles: independent alpha and beta singles,
      // sign_a * sign_b * (p r | q s).
      for (const Single& sa : alpha_singles[ia]) {
        for (const Single& sb : beta_singles[ib]) {
          sigma[sa.rank * nb + sb.rank] +=
              sa.sign * sb.sign * h.eri(sa.p, sa.r, sb.p, sb.r) * c;
        }
      }
    }
  }
  return sigma;
}

inline Eigen::VectorXd apply_hamiltonian(const MolecularHamiltonian& h,
                                         const Wavefunction& psi) {
  return apply_hamiltonian(h, psi.space, psi.coeffs);
}

struct SolverOptions {
  double tol = 1e-9;          // residual 2-norm target
  int max_iter = 400;         // sigma applications before giving up
  std::int64_t max_space_dim = 20'000'000;
  int max_subspace = 24;      // Davidson subspace cap before restart
};

namespace detail {

// Davidson iteration for the lowest eigenpair of a symmetric operator,
// deterministic start on the lowest-diagonal unit vector (ties break to the
// lowest index).
inline std::pair<double, Eigen::VectorXd> davidson_lowest(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
    const Eigen::VectorXd& diag, const SolverOptions& opts) {
  const std::int64_t n = diag.size();
  if (n == 1) {
    Eigen::VectorXd one(1);
    one[0] = 1.0;
    return {diag[0], one};
  }
  double dmin = diag[0];
  for (std::int64_t i = 1; i < n; ++i) dmin = std::min(dmin, diag[i]);
  // Start from every determinant tied at the lowest diagonal, with graded
  // weights. A degenerate tie can span a symmetry multiplet, where both a
  // single member and the equal-weight sum can be exactly orthogonal to the
  // ground state; distinct weights keep a nonzero overlap generically.
  std::vector<Eigen::VectorXd> basis, sigmas;
  Eigen::VectorXd b0 = Eigen::VectorXd::Zero(n);
  int picked = 0;
  for (std::int64_t i = 0; i < n && picked < 64; ++i) {
    if (diag[i] <= dmin + 1e-9) {
      b0[i] = 1.0 / (1.0 + picked);
      ++picked;
    }
  }
  b0.normalize();
  basis.push_back(b0);
  sigmas.push_back(apply(b0));

  double theta = 0.0;
  Eigen::VectorXd ritz, residual;
  double best_residual = std::numeric_limits<double>::infinity();
  for (int it = 1; it < opts.max_iter; ++it) {
    const int k = static_cast<int>(basis.size());
    Eigen::MatrixXd g(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j <= i; ++j) {
        g(i, j) = basis[i].dot(sigmas[j]);
        g(j, i) = g(i, j);
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    theta = es.eigenvalues()[0];
    const Eigen::VectorXd y = es.eigenvectors().col(0);
    ritz = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sx = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < k; ++i) {
      ritz += y[i] * basis[i];
      sx += y[i] * sigmas[i];
    }
    residual = sx - theta * ritz;
    const double rnorm = residual.norm();
    best_residual = std::min(best_residual, rnorm);
    if (rnorm <= opts.tol) {
      ritz.normalize();
      Eigen::Index imax = 0;
      ritz.cwiseAbs().maxCoeff(&imax);
      if (ritz[imax] < 0) ritz = -ritz;
      return {theta, ritz};
    }
    if (k >= opts.max_subspace || k >= n) {
      // Restart from the current Ritz vector.
      ritz.normalize();
      basis.assign(1, ritz);
      sigmas.assign(1, apply(ritz));
      continue;
    }
    // Diagonal preconditioner with a floor against zero denominators.
    Eigen::VectorXd t(n);
    for (std::int64_t i = 0; i < n; ++i) {
      double den = theta - diag[i];
      if (std::abs(den) < 1e-8) den = (den < 0 ? -1e-8 : 1e-8);
      t[i] = residual[i] / den;
    }
    // Orthogonalize twice against the subspace.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) t -= b.dot(t) * b;
    }
    double tn = t.norm();
    if (tn < 1e-12) {
      t = residual;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) t -= b.dot(t) * b;
      }
      tn = t.norm();
      if (tn < 1e-14) {
        // Subspace is numerically invariant; accept the Ritz value.
        ritz.normalize();
        Eigen::Index imax = 0;
        ritz.cwiseAbs().maxCoeff(&imax);
        if (ritz[imax] < 0) ritz = -ritz;
        return {theta, ritz};
      }
    }
    t /= tn;
    basis.push_back(t);
    sigmas.push_back(apply(t));
  }
  throw convergence_error("davidson did not reach tolerance", best_residual);
}

}  // namespace detail

struct GroundState {
  double energy = 0.0;
  Wavefunction psi;
};

inline DeterminantSpace sector_space(const MolecularHamiltonian& h,
                                     const SolverOptions& opts = {}) {
  const auto [na, nb] = sector_occupations(h.n_electrons(), h.ms2(),
                                           h.n_orbitals());
  DeterminantSpace space = enumerate_determinants(h.n_orbitals(), na, nb);
  if (space.size() > opts.max_space_dim) {
    throw capacity_error("determinant space exceeds max_space_dim");
  }
  return space;
}

// Lowest eigenpair of H in the (n_elec, ms2) sector; global phase is fixed
// by making the largest-magnitude coefficient positive.
inline GroundState ground_state(const MolecularHamiltonian& h,
                                const SolverOptions& opts = {}) {
  DeterminantSpace space = sector_space(h, opts);
  const Eigen::VectorXd diag = hamiltonian_diagonal(h, space);
  auto apply = [&](const Eigen::VectorXd& x) {
    return apply_hamiltonian(h, space, x, &diag);
  };
  auto [e, vec] = detail::davidson_lowest(apply, diag, opts);
  GroundState g;
  g.energy = e;
  g.psi.space = std::move(space);
  g.psi.coeffs = std::move(vec);
  return g;
}

struct SpectralBounds {
  double e_min = 0.0;
  double e_max = 0.0;
};

// Extreme sector eigenvalues; the top is the lowest eigenvalue of -H by the
// same Davidson iteration.
inline SpectralBounds spectral_bounds(const MolecularHamiltonian& h,
                                      const SolverOptions& opts = {}) {
  DeterminantSpace space = sector_space(h, opts);
  const Eigen::VectorXd diag = hamiltonian_diagonal(h, space);
  auto apply = [&](const Eigen::VectorXd& x) {
    return apply_hamiltonian(h, space, x, &diag);
  };
  SpectralBounds b;
  b.e_min = detail::davidson_lowest(apply, diag, opts).first;
  const Eigen::VectorXd ndiag = -diag;
  auto napply = [&](const Eigen::VectorXd& x) {
    return (-apply_hamiltonian(h, space, x, &diag)).eval();
  };
  b.e_max = -detail::davidson_lowest(napply, ndiag, opts).first;
  return b;
}

struct ProjectionResult {
  Wavefunction psi;     // renormalized projection onto the CAS subspace
  double weight = 0.0;  // squared norm kept by the projector
  double epsilon = 0.0; // 1 - weight
};

// Project onto determinants with every closed orbital doubly occupied and
// every virtual orbital empty, then renormalize.
inline ProjectionResult project_cas(const Wavefunction& psi,
                                    const CasPartition& part) {
  const int d = psi.space.d;
  if (part.n_orbitals() != d) {
    throw dimension_error("partition does not match orbital count");
  }
  std::uint64_t closed_mask = 0, virt_mask = 0;
  for (int i : part.closed) closed_mask |= (1ULL << i);
  for (int i : part.virt) virt_mask |= (1ULL << i);

  ProjectionResult out;
  out.psi.space = psi.space;
  out.psi.coeffs = psi.coeffs;
  const std::int64_t nb =
      static_cast<std::int64_t>(psi.space.beta_strings.size());
  double weight = 0.0;
  for (std::size_t ia = 0; ia < psi.space.alpha_strings.size(); ++ia) {
    const std::uint64_t a = psi.space.alpha_strings[ia];
    const bool a_ok = ((a & closed_mask) == closed_mask) && !(a & virt_mask);
    for (std::size_t ib = 0; ib < psi.space.beta_strings.size(); ++ib) {
      const std::uint64_t b = psi.space.beta_strings[ib];
      const std::int64_t k = static_cast<std::int64_t>(ia) * nb +
                             static_cast<std::int64_t>(ib);
      const bool keep = a_ok && ((b & closed_mask) == closed_mask) &&
                        !(b & virt_mask);
      if (keep) {
        weight += psi.coeffs[k] * psi.coeffs[k];
      } else {
        out.psi.coeffs[k] = 0.0;
      }
    }
  }
  out.weight = weight;
  out.epsilon = 1.0 - weight;
  if (weight < 1e-14) {
    throw projection_error("projected CAS weight too small to renormalize");
  }
  out.psi.coeffs /= std::sqrt(weight);
  return out;
}

}  // namespace qicas
