// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "qicas/errors.hpp"

namespace qicas {

namespace detail {

// Compound index for a symmetric pair, p >= q not required on input.
inline std::size_t pair_index(std::size_t p, std::size_t q) {
  return (p >= q) ? p * (p + 1) / 2 + q : q * (q + 1) / 2 + p;
}

// Canonical position of (pq|rs) under the full 8-fold permutational
// symmetry: (pq|rs) = (qp|rs) = (pq|sr) = (qp|sr) = (rs|pq) = ...
inline std::size_t canonical_eri_index(std::size_t p, std::size_t q,
                                       std::size_t r, std::size_t s) {
  const std::size_t pq = pair_index(p, q);
  const std::size_t rs = pair_index(r, s);
  return (pq >= rs) ? pq * (pq + 1) / 2 + rs : rs * (rs + 1) / 2 + pq;
}

// out[a][b][c][d] = sum_{pqrs} U[a][p] U[b][q] U[c][r] U[d][s] in[p][q][r][s],
// evaluated as four sequential one-index contractions, O(D^5) total.
// Flat layout: index(p,q,r,s) = ((p*D + q)*D + r)*D + s.
inline std::vector<double> rotate_rank4(const std::vector<double>& in,
                                        const Eigen::MatrixXd& u) {
  const std::size_t d = static_cast<std::size_t>(u.rows());
  if (u.cols() != static_cast<Eigen::Index>(d) ||
      in.size() != d * d * d * d) {
    throw dimension_error("rotate_rank4: dimension mismatch");
  }
  std::vector<double> a(in), b(d * d * d * d);
  // Contract the leading slot, then cycle (p,q,r,s) -> (q,r,s,a) so each
  // pass contracts a leading slot; four cycles restore the original order.
  for (int pass = 0; pass < 4; ++pass) {
    const std::size_t rest = d * d * d;
    for (std::size_t out_a = 0; out_a < d; ++out_a) {
      for (std::size_t tail = 0; tail < rest; ++tail) {
        double acc = 0.0;
        for (std::size_t p = 0; p < d; ++p) {
          acc += u(static_cast<Eigen::Index>(out_a),
                   static_cast<Eigen::Index>(p)) * a[p * rest + tail];
        }
        // Store transposed: position (tail, out_a) of the next pass.
        b[tail * d + out_a] = acc;
      }
    }
    std::swap(a, b);
  }
  return a;
}

}  // namespace detail

// Dense second-quantized Hamiltonian data for D spatial orbitals,
//   H = e_core + sum_{pq,u} h1[p][q] c+_{pu} c_{qu}
//       + 1/2 sum_{pqrs,uv} (pq|rs) c+_{pu} c+_{rv} c_{sv} c_{qu},
// spin labels u,v; two-electron integrals in chemists' notation (pq|rs),
// stored once per 8-fold-symmetry orbit.
class MolecularHamiltonian {
 public:
  MolecularHamiltonian() = default;

  MolecularHamiltonian(int n_orbitals, int n_electrons, int ms2,
                       double core_energy = 0.0)
      : d_(n_orbitals),
        n_elec_(n_electrons),
        ms2_(ms2),
        e_core_(core_energy),
        h1_(Eigen::MatrixXd::Zero(n_orbitals, n_orbitals)) {
    if (n_orbitals < 0 || n_orbitals > 20) {
      throw capacity_error("orbital count must be in [0, 20]");
    }
    if (n_electrons < 0 || n_electrons > 2 * n_orbitals) {
      throw domain_error("electron count must be in [0, 2*D]");
    }
    const std::size_t npair =
        static_cast<std::size_t>(n_orbitals) * (n_orbitals + 1) / 2;
    eri_.assign(npair * (npair + 1) / 2, 0.0);
  }

  int n_orbitals() const { return d_; }
  int n_electrons() const { return n_elec_; }
  int ms2() const { return ms2_; }
  double e_core() const { return e_core_; }
  void set_e_core(double e) { e_core_ = e; }
  void set_n_electrons(int n) {
    if (n < 0 || n > 2 * d_) throw domain_error("electron count out of range");
    n_elec_ = n;
  }
  void set_ms2(int m) { ms2_ = m; }

  const Eigen::MatrixXd& h1() const { return h1_; }
  Eigen::MatrixXd& h1() { return h1_; }

  double eri(int p, int q, int r, int s) const {
    check_index(p); check_index(q); check_index(r); check_index(s);
    return eri_[detail::canonical_eri_index(p, q, r, s)];
  }

  // Assignment through any of the 8 equivalent index orders hits the same
  // storage slot, so the symmetry holds by construction.
  void set_eri(int p, int q, int r, int s, double value) {
    check_index(p); check_index(q); check_index(r); check_index(s);
    eri_[detail::canonical_eri_index(p, q, r, s)] = value;
  }

  const std::vector<double>& eri_storage() const { return eri_; }

  // Expand canonical storage to the full D^4 tensor, flat layout
  // ((p*D+q)*D+r)*D+s.
  std::vector<double> eri_full() const {
    const std::size_t d = static_cast<std::size_t>(d_);
    std::vector<double> full(d * d * d * d);
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = 0; q < d; ++q)
        for (std::size_t r = 0; r < d; ++r)
          for (std::size_t s = 0; s < d; ++s)
            full[((p * d + q) * d + r) * d + s] =
                eri_[detail::canonical_eri_index(p, q, r, s)];
    return full;
  }

 private:
  void check_index(int i) const {
    if (i < 0 || i >= d_) throw range_error("orbital index out of range");
  }

  int d_ = 0;
  int n_elec_ = 0;
  int ms2_ = 0;
  double e_core_ = 0.0;
  Eigen::MatrixXd h1_;
  std::vector<double> eri_;  // canonical 8-fold-symmetric storage
};

// 1D Hubbard chain: nearest-neighbour hopping -t, on-site repulsion
// (ii|ii) = u. Periodic chains close the ring; L = 2 periodic would double
// the 0-1 bond, so it is rejected.
inline MolecularHamiltonian build_hubbard(int n_sites, double t, double u,
                                          int n_electrons, int ms2 = 0,
                                          bool periodic = false) {
  if (n_sites < 1) throw domain_error("hubbard chain needs at least one site");
  if (periodic && n_sites == 2) {
    throw domain_error("periodic hubbard chain requires L >= 3");
  }
  MolecularHamiltonian h(n_sites, n_electrons, ms2);
  for (int i = 0; i + 1 < n_sites; ++i) {
    h.h1()(i, i + 1) = -t;
    h.h1()(i + 1, i) = -t;
  }
  if (periodic && n_sites >= 3) {
    h.h1()(0, n_sites - 1) = -t;
    h.h1()(n_sites - 1, 0) = -t;
  }
  for (int i = 0; i < n_sites; ++i) h.set_eri(i, i, i, i, u);
  return h;
}

// Change of orbital basis phi~_a = sum_p u[a][p] phi_p:
//   h1~ = u h1 u^T,  (ab|cd)~ = sum u_ap u_bq u_cr u_ds (pq|rs).
// The rank-4 congruence preserves the 8-fold symmetry, so repacking to
// canonical storage loses nothing.
inline MolecularHamiltonian transform_integrals(const MolecularHamiltonian& h,
                                                const Eigen::MatrixXd& u) {
  const int d = h.n_orbitals();
  if (u.rows() != d || u.cols() != d) {
    throw dimension_error("transform_integrals: U must be D x D");
  }
  MolecularHamiltonian out(d, h.n_electrons(), h.ms2(), h.e_core());
  out.h1() = u * h.h1() * u.transpose();
  const std::vector<double> full = detail::rotate_rank4(h.eri_full(), u);
  const std::size_t dd = static_cast<std::size_t>(d);
  for (int p = 0; p < d; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r <= p; ++r)
        for (int s = 0; s <= r; ++s) {
          if (detail::pair_index(p, q) < detail::pair_index(r, s)) continue;
          out.set_eri(p, q, r, s,
                      full[((static_cast<std::size_t>(p) * dd + q) * dd + r) *
                               dd + s]);
        }
  return out;
}

// Largest deviation of the full transformed tensor from 8-fold symmetry;
// diagnostic used to confirm that a congruence kept the symmetry intact.
inline double eri_asymmetry(const std::vector<double>& full, int d) {
  const std::size_t dd = static_cast<std::size_t>(d);
  if (full.size() != dd * dd * dd * dd) {
    throw dimension_error("eri_asymmetry: tensor size mismatch");
  }
  auto at = [&](std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return full[((p * dd + q) * dd + r) * dd + s];
  };
  double worst = 0.0;
  for (std::size_t p = 0; p < dd; ++p)
    for (std::size_t q = 0; q < dd; ++q)
      for (std::size_t r = 0; r < dd; ++r)
        for (std::size_t s = 0; s < dd; ++s) {
          const double v = at(p, q, r, s);
          const double alt[7] = {at(q, p, r, s), at(p, q, s, r),
                                 at(q, p, s, r), at(r, s, p, q),
                                 at(s, r, p, q), at(r, s, q, p),
                                 at(s, r, q, p)};
          for (double w : alt) worst = std::max(worst, std::abs(v - w));
        }
  return worst;
}

}  // namespace qicas
