// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdlib>
#include <vector>

#include "qicas/errors.hpp"
#include "qicas/fci.hpp"
#include "qicas/hamiltonian.hpp"
#include "qicas/partition.hpp"

namespace qicas {

// Fold the doubly occupied closed shells into an effective active-space
// Hamiltonian (closed-shell mean field, exact for the CAS ansatz):
//   e_core_eff = e_core + sum_{i in C} 2 h[i][i]
//                + sum_{i,j in C} [2 (ii|jj) - (ij|ji)]
//   h_act[p][q] = h[p][q] + sum_{i in C} [2 (pq|ii) - (pi|iq)]
// Two-electron integrals restrict to active indices unchanged. The returned
// Hamiltonian carries n_cas electrons, the original ms2, and e_core_eff as
// its scalar term.
inline MolecularHamiltonian fold_core(const MolecularHamiltonian& h,
                                      const CasPartition& part) {
  part.validate(h.n_orbitals(),
                part.n_cas + 2 * static_cast<int>(part.closed.size()));
  if (part.n_cas + 2 * static_cast<int>(part.closed.size()) !=
      h.n_electrons()) {
    throw domain_error("partition electron count does not match Hamiltonian");
  }
  if (std::abs(h.ms2()) > part.n_cas) {
    throw domain_error("spin projection exceeds active electron count");
  }
  const auto& h1 = h.h1();
  double e_core = h.e_core();
  for (int i : part.closed) e_core += 2.0 * h1(i, i);
  for (int i : part.closed)
    for (int j : part.closed) {
      e_core += 2.0 * h.eri(i, i, j, j) - h.eri(i, j, j, i);
    }

  const int da = part.d_cas();
  MolecularHamiltonian out(da, part.n_cas, h.ms2(), e_core);
  for (int a = 0; a < da; ++a) {
    for (int b = 0; b < da; ++b) {
      const int p = part.active[a], q = part.active[b];
      double v = h1(p, q);
      for (int i : part.closed) {
        v += 2.0 * h.eri(p, q, i, i) - h.eri(p, i, i, q);
      }
      out.h1()(a, b) = v;
    }
  }
  for (int a = 0; a < da; ++a)
    for (int b = 0; b <= a; ++b)
      for (int c = 0; c <= a; ++c)
        for (int e = 0; e <= c; ++e) {
          if (detail::pair_index(a, b) < detail::pair_index(c, e)) continue;
          out.set_eri(a, b, c, e,
                      h.eri(part.active[a], part.active[b], part.active[c],
                            part.active[e]));
        }
  return out;
}

struct CasciResult {
  double e_total = 0.0;
  double e_core_eff = 0.0;
  GroundState active;  // ground state of the folded active Hamiltonian
};

// CASCI energy in the basis u: rotate the integrals, fold the closed
// shells, and solve the active-space eigenproblem exactly.
inline CasciResult casci_energy(const MolecularHamiltonian& h,
                                const Eigen::MatrixXd& u,
                                const CasPartition& part,
                                const SolverOptions& opts = {}) {
  const MolecularHamiltonian rotated = transform_integrals(h, u);
  const MolecularHamiltonian folded = fold_core(rotated, part);
  CasciResult out;
  out.e_core_eff = folded.e_core();
  out.active = ground_state(folded, opts);
  out.e_total = out.active.energy;  // folded core energy is inside
  return out;
}

inline CasciResult casci_energy(const MolecularHamiltonian& h,
                                const CasPartition& part,
                                const SolverOptions& opts = {}) {
  const MolecularHamiltonian folded = fold_core(h, part);
  CasciResult out;
  out.e_core_eff = folded.e_core();
  out.active = ground_state(folded, opts);
  out.e_total = out.active.energy;
  return out;
}

}  // namespace qicas
