// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "qicas/errors.hpp"
#include "qicas/wavefunction.hpp"

namespace qicas {

// Spin-resolved one-body reduced density matrices and the opposite-spin
// two-body block
//   gamma_a[p][q]       = <c+_{p,up} c_{q,up}>
//   gamma_b[p][q]       = <c+_{p,dn} c_{q,dn}>
//   gamma_os[p][q][r][s] = <c+_{p,up} c+_{q,dn} c_{s,dn} c_{r,up}>
// stored as a dense D^4 tensor, flat layout ((p*D+q)*D+r)*D+s.
struct SpinTracedRDMs {
  int d = 0;
  Eigen::MatrixXd gamma_a;
  Eigen::MatrixXd gamma_b;
  std::vector<double> gamma_os;

  double os(int p, int q, int r, int s) const {
    const std::size_t dd = static_cast<std::size_t>(d);
    return gamma_os[((static_cast<std::size_t>(p) * dd + q) * dd + r) * dd + s];
  }
  double& os(int p, int q, int r, int s) {
    const std::size_t dd = static_cast<std::size_t>(d);
    return gamma_os[((static_cast<std::size_t>(p) * dd + q) * dd + r) * dd + s];
  }
};

namespace detail {

// Apply c+_p c_r to one spin string; returns false when it annihilates.
inline bool single_move(std::uint64_t mask, int p, int r, std::uint64_t* out,
                        int* sign) {
  if (!((mask >> r) & 1ULL)) return false;
  if (p != r && ((mask >> p) & 1ULL)) return false;
  *out = (mask ^ (1ULL << r)) | (1ULL << p);
  *sign = excitation_sign(mask, p, r);
  return true;
}

}  // namespace detail

// Spin-resolved 1-RDMs; both matrices are symmetric for real CI vectors.
inline void compute_1rdm(const Wavefunction& psi, Eigen::MatrixXd* gamma_a,
                         Eigen::MatrixXd* gamma_b) {
  const DeterminantSpace& space = psi.space;
  const int d = space.d;
  *gamma_a = Eigen::MatrixXd::Zero(d, d);
  *gamma_b = Eigen::MatrixXd::Zero(d, d);
  const std::int64_t nb = static_cast<std::int64_t>(space.beta_strings.size());
  for (std::size_t ia = 0; ia < space.alpha_strings.size(); ++ia) {
    for (std::size_t ib = 0; ib < space.beta_strings.size(); ++ib) {
      const std::int64_t k = static_cast<std::int64_t>(ia) * nb +
                             static_cast<std::int64_t>(ib);
      const double c = psi.coeffs[k];
      if (c == 0.0) continue;
      const std::uint64_t amask = space.alpha_strings[ia];
      const std::uint64_t bmask = space.beta_strings[ib];
      for (int r = 0; r < d; ++r) {
        for (int p = 0; p < d; ++p) {
          std::uint64_t ex;
          int sg;
          if (detail::single_move(amask, p, r, &ex, &sg)) {
            const std::int64_t k2 = space.alpha_rank.at(ex) * nb +
                                    static_cast<std::int64_t>(ib);
            (*gamma_a)(p, r) += sg * psi.coeffs[k2] * c;
          }
          if (detail::single_move(bmask, p, r, &ex, &sg)) {
            const std::int64_t k2 = static_cast<std::int64_t>(ia) * nb +
                                    space.beta_rank.at(ex);
            (*gamma_b)(p, r) += sg * psi.coeffs[k2] * c;
          }
        }
      }
    }
  }
}

// Opposite-spin 2-RDM block. The two excitations act on independent spin
// strings, so the total sign is the product of the string signs.
inline std::vector<double> compute_os_2rdm(const Wavefunction& psi) {
  const DeterminantSpace& space = psi.space;
  const int d = space.d;
  const std::size_t dd = static_cast<std::size_t>(d);
  std::vector<double> g(dd * dd * dd * dd, 0.0);
  const std::int64_t nb = static_cast<std::int64_t>(space.beta_strings.size());

  struct Move {
    std::int64_t rank;
    int p, r;
    int sign;
  };
  auto moves_of = [&](const std::vector<std::uint64_t>& strings,
                      const std::unordered_map<std::uint64_t, std::int64_t>&
                          rank) {
    std::vector<std::vector<Move>> out(strings.size());
    for (std::size_t i = 0; i < strings.size(); ++i) {
      for (int r = 0; r < d; ++r) {
        for (int p = 0; p < d; ++p) {
          std::uint64_t ex;
          int sg;
          if (detail::single_move(strings[i], p, r, &ex, &sg)) {
            out[i].push_back({rank.at(ex), p, r, sg});
          }
        }
      }
    }
    return out;
  };
  const auto amoves = moves_of(space.alpha_strings, space.alpha_rank);
  const auto bmoves = moves_of(space.beta_strings, space.beta_rank);

  for (std::size_t ia = 0; ia < space.alpha_strings.size(); ++ia) {
    for (std::size_t ib = 0; ib < space.beta_strings.size(); ++ib) {
      const std::int64_t k = static_cast<std::int64_t>(ia) * nb +
                             static_cast<std::int64_t>(ib);
      const double c = psi.coeffs[k];
      if (c == 0.0) continue;
      for (const Move& ma : amoves[ia]) {
        for (const Move& mb : bmoves[ib]) {
          const std::int64_t k2 = ma.rank * nb + mb.rank;
          // <psi| c+_{p,up} c+_{q,dn} c_{s,dn} c_{r,up} |psi>, bra index k2.
          g[((static_cast<std::size_t>(ma.p) * dd + mb.p) * dd + ma.r) * dd +
            mb.r] += ma.sign * mb.sign * psi.coeffs[k2] * c;
        }
      }
    }
  }
  return g;
}

inline SpinTracedRDMs compute_rdms(const Wavefunction& psi) {
  SpinTracedRDMs r;
  r.d = psi.space.d;
  compute_1rdm(psi, &r.gamma_a, &r.gamma_b);
  r.gamma_os = compute_os_2rdm(psi);
  return r;
}

// Single-orbital density-matrix spectrum in the ordered basis
// {empty, up, down, doubly occupied}:
//   lambda = (1 - ga - gb + G, ga - G, gb - G, G)
// with ga = gamma_a[i][i], gb = gamma_b[i][i], G = gamma_os[i][i][i][i].
struct OrbitalSpectrum {
  std::array<double, 4> lambda{};
  double occupancy = 0.0;  // ga + gb
};

inline OrbitalSpectrum orbital_spectrum(const SpinTracedRDMs& r, int i) {
  if (i < 0 || i >= r.d) throw range_error("orbital index out of range");
  const double ga = r.gamma_a(i, i);
  const double gb = r.gamma_b(i, i);
  const double g2 = r.os(i, i, i, i);
  OrbitalSpectrum s;
  s.lambda = {1.0 - ga - gb + g2, ga - g2, gb - g2, g2};
  s.occupancy = ga + gb;
  for (double& l : s.lambda) {
    if (l < -1e-8) {
      throw positivity_error("single-orbital eigenvalue below -1e-8");
    }
    if (l < 0.0 && l >= -1e-10) l = 0.0;  // round-off clamp
  }
  return s;
}

namespace detail {

// Interleaved spin-orbital mode order (0up, 0dn, 1up, 1dn, ...) used for
// subsystem density matrices. `target_rank[m]` ranks the modes so that the
// subset's modes (subset order, up before down) come first. The sign of a
// determinant relative to that ordering is the inversion parity of its
// occupied modes' target ranks read in determinant order (alpha block
// ascending, then beta block ascending).
struct SubsystemIndexer {
  int d;
  std::vector<int> target_rank;       // per interleaved mode
  std::vector<int> subset;            // orbital indices, given order
  std::vector<int> orbital_slot;      // orbital -> subset position or -1

  SubsystemIndexer(int d_, const std::vector<int>& subset_) : d(d_) {
    subset = subset_;
    orbital_slot.assign(d, -1);
    for (std::size_t k = 0; k < subset.size(); ++k) {
      const int o = subset[k];
      if (o < 0 || o >= d) throw range_error("subsystem orbital out of range");
      if (orbital_slot[o] != -1) {
        throw domain_error("subsystem orbital listed twice");
      }
      orbital_slot[o] = static_cast<int>(k);
    }
    target_rank.assign(2 * d, 0);
    int next = 0;
    for (int o : subset) {
      target_rank[2 * o] = next++;      // o up
      target_rank[2 * o + 1] = next++;  // o down
    }
    for (int o = 0; o < d; ++o) {
      if (orbital_slot[o] == -1) {
        target_rank[2 * o] = next++;
        target_rank[2 * o + 1] = next++;
      }
    }
  }

  // Local basis digit per orbital: n_up + 2*n_dn, i.e. {0, up, dn, updn};
  // the doubly occupied state is c+_up c+_dn |0>.
  void decompose(std::uint64_t amask, std::uint64_t bmask,
                 std::int64_t* local_index, std::uint64_t* env_key,
                 int* sign) const {
    // Occupied modes in determinant order.
    int ranks[128];
    int n = 0;
    std::uint64_t m = amask;
    while (m) {
      const int o = std::countr_zero(m);
      m &= m - 1;
      ranks[n++] = target_rank[2 * o];
    }
    m = bmask;
    while (m) {
      const int o = std::countr_zero(m);
      m &= m - 1;
      ranks[n++] = target_rank[2 * o + 1];
    }
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (ranks[i] > ranks[j]) ++inversions;
    *sign = (inversions & 1) ? -1 : 1;

    std::int64_t idx = 0;
    for (int o : subset) {
      const int digit = static_cast<int>((amask >> o) & 1ULL) +
                        2 * static_cast<int>((bmask >> o) & 1ULL);
      idx = idx * 4 + digit;
    }
    *local_index = idx;

    std::uint64_t subset_mask = 0;
    for (int o : subset) subset_mask |= (1ULL << o);
    const std::uint64_t aenv = amask & ~subset_mask;
    const std::uint64_t benv = bmask & ~subset_mask;
    *env_key = (aenv << d) | benv;
  }
};

}  // namespace detail

// Reduced density matrix of the named orbitals (given order), dimension
// 4^|subset|, basis {empty, up, down, updn} per orbital with the first
// subset orbital as the leading tensor factor. The environment is traced
// out with full fermionic sign bookkeeping, so the result is a genuine
// density matrix: symmetric, unit trace, positive semidefinite.
inline Eigen::MatrixXd subsystem_rdm(const Wavefunction& psi,
                                     const std::vector<int>& subset) {
  if (subset.empty()) throw domain_error("subsystem must be nonempty");
  if (subset.size() > 8) {
    throw capacity_error("subsystem larger than 8 orbitals");
  }
  const DeterminantSpace& space = psi.space;
  const detail::SubsystemIndexer indexer(space.d, subset);
  const std::int64_t dim = std::int64_t(1) << (2 * subset.size());
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(dim, dim);

  // Group determinants by environment configuration.
  struct Entry {
    std::int64_t local;
    double signed_coeff;
  };
  std::unordered_map<std::uint64_t, std::vector<Entry>> groups;
  const std::int64_t nb = static_cast<std::int64_t>(space.beta_strings.size());
  for (std::size_t ia = 0; ia < space.alpha_strings.size(); ++ia) {
    for (std::size_t ib = 0; ib < space.beta_strings.size(); ++ib) {
      const std::int64_t k = static_cast<std::int64_t>(ia) * nb +
                             static_cast<std::int64_t>(ib);
      const double c = psi.coeffs[k];
      if (c == 0.0) continue;
      std::int64_t local;
      std::uint64_t env;
      int sign;
      indexer.decompose(space.alpha_strings[ia], space.beta_strings[ib],
                        &local, &env, &sign);
      groups[env].push_back({local, sign * c});
    }
  }
  for (const auto& [env, entries] : groups) {
    for (const Entry& e1 : entries) {
      for (const Entry& e2 : entries) {
        rho(e1.local, e2.local) += e1.signed_coeff * e2.signed_coeff;
      }
    }
  }
  return rho;
}

// Two-orbital reduced density matrix, 16x16, orbital i as the leading
// tensor factor.
inline Eigen::MatrixXd two_orbital_rdm(const Wavefunction& psi, int i, int j) {
  if (i == j) throw domain_error("two-orbital RDM needs distinct orbitals");
  return subsystem_rdm(psi, {i, j});
}

}  // namespace qicas
