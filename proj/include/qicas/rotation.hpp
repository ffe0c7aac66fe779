// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "qicas/correlation.hpp"
#include "qicas/errors.hpp"
#include "qicas/hamiltonian.hpp"
#include "qicas/partition.hpp"
#include "qicas/rdm.hpp"

namespace qicas {

// Planar (Jacobi) rotation: identity except
//   u[i][i] = cos t, u[i][j] = sin t, u[j][i] = -sin t, u[j][j] = cos t.
inline Eigen::MatrixXd jacobi_matrix(int d, int i, int j, double theta) {
  if (i < 0 || j < 0 || i >= d || j >= d || i == j) {
    throw domain_error("jacobi_matrix needs two distinct in-range indices");
  }
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(d, d);
  const double c = std::cos(theta), s = std::sin(theta);
  u(i, i) = c;
  u(i, j) = s;
  u(j, i) = -s;
  u(j, j) = c;
  return u;
}

inline Eigen::MatrixXd rotate_1rdm(const Eigen::MatrixXd& gamma,
                                   const Eigen::MatrixXd& u) {
  if (gamma.rows() != u.rows() || gamma.cols() != u.rows()) {
    throw dimension_error("rotate_1rdm: dimension mismatch");
  }
  return u * gamma * u.transpose();
}

inline std::vector<double> rotate_os_2rdm(const std::vector<double>& g,
                                          const Eigen::MatrixXd& u) {
  return detail::rotate_rank4(g, u);
}

inline SpinTracedRDMs rotate_rdms(const SpinTracedRDMs& r,
                                  const Eigen::MatrixXd& u) {
  SpinTracedRDMs out;
  out.d = r.d;
  out.gamma_a = rotate_1rdm(r.gamma_a, u);
  out.gamma_b = rotate_1rdm(r.gamma_b, u);
  out.gamma_os = rotate_os_2rdm(r.gamma_os, u);
  return out;
}

namespace detail {

// In-place Jacobi update of a symmetric matrix, rows then columns.
inline void apply_jacobi_sym(Eigen::MatrixXd& m, int i, int j, double c,
                             double s) {
  const Eigen::VectorXd ri = m.row(i), rj = m.row(j);
  m.row(i) = c * ri + s * rj;
  m.row(j) = -s * ri + c * rj;
  const Eigen::VectorXd ci = m.col(i), cj = m.col(j);
  m.col(i) = c * ci + s * cj;
  m.col(j) = -s * ci + c * cj;
}

// In-place Jacobi update of a rank-4 tensor on all four slots, O(D^3) per
// slot. Flat layout ((p*D+q)*D+r)*D+s.
inline void apply_jacobi_rank4(std::vector<double>& g, int d, int i, int j,
                               double c, double s) {
  const std::size_t dd = static_cast<std::size_t>(d);
  const std::size_t strides[4] = {dd * dd * dd, dd * dd, dd, 1};
  for (int slot = 0; slot < 4; ++slot) {
    const std::size_t stride = strides[slot];
    // Enumerate all positions with slot index fixed to i (paired with j).
    std::size_t outer_count = 1, inner_count = 1;
    for (int k = 0; k < slot; ++k) outer_count *= dd;
    for (int k = slot + 1; k < 4; ++k) inner_count *= dd;
    const std::size_t outer_stride = stride * dd;
    for (std::size_t o = 0; o < outer_count; ++o) {
      const std::size_t base = o * outer_stride;
      double* gi = g.data() + base + static_cast<std::size_t>(i) * stride;
      double* gj = g.data() + base + static_cast<std::size_t>(j) * stride;
      for (std::size_t t = 0; t < inner_count; ++t) {
        const double vi = gi[t], vj = gj[t];
        gi[t] = c * vi + s * vj;
        gj[t] = -s * vi + c * vj;
      }
    }
  }
}

}  // namespace detail

// Accumulated orthogonal basis change with drift control. Rows are the
// current orbitals expressed in the reference basis.
struct OrbitalRotation {
  Eigen::MatrixXd u;

  static OrbitalRotation identity(int d) {
    return {Eigen::MatrixXd::Identity(d, d)};
  }

  void apply_jacobi(int i, int j, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const Eigen::VectorXd ri = u.row(i), rj = u.row(j);
    u.row(i) = c * ri + s * rj;
    u.row(j) = -s * ri + c * rj;
  }

  double orthogonality_defect() const {
    const Eigen::MatrixXd g = u.transpose() * u -
                              Eigen::MatrixXd::Identity(u.rows(), u.cols());
    return g.cwiseAbs().maxCoeff();
  }

  // Symmetric (closest-matrix) reorthonormalization u <- (u u^T)^{-1/2} u.
  void reorthonormalize() {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(u * u.transpose());
    const Eigen::VectorXd inv_sqrt =
        es.eigenvalues().cwiseSqrt().cwiseInverse();
    u = es.eigenvectors() * inv_sqrt.asDiagonal() *
        es.eigenvectors().transpose() * u;
  }
};

struct JacobiStep {
  int i = 0;
  int j = 0;
  double theta = 0.0;
};

namespace detail {

// Single-orbital entropies of i and j after a hypothetical planar rotation,
// from the 2x2 one-body blocks and the 16 opposite-spin entries alone.
inline void pair_entropies_after(const SpinTracedRDMs& r, int i, int j,
                                 double theta, double* s_i, double* s_j) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double wi[2] = {c, s}, wj[2] = {-s, c};
  const int idx[2] = {i, j};
  auto diag_after = [&](const Eigen::MatrixXd& g, const double* w) {
    return w[0] * w[0] * g(i, i) + 2.0 * w[0] * w[1] * g(i, j) +
           w[1] * w[1] * g(j, j);
  };
  auto os_after = [&](const double* w) {
    double acc = 0.0;
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q)
        for (int t = 0; t < 2; ++t)
          for (int v = 0; v < 2; ++v) {
            acc += w[p] * w[q] * w[t] * w[v] *
                   r.os(idx[p], idx[q], idx[t], idx[v]);
          }
    return acc;
  };
  auto entropy_from = [&](double ga, double gb, double g2) {
    std::array<double, 4> lam{1.0 - ga - gb + g2, ga - g2, gb - g2, g2};
    for (double& l : lam) {
      if (l < -1e-8) {
        throw positivity_error("single-orbital eigenvalue below -1e-8");
      }
      if (l < 0.0 && l >= -1e-10) l = 0.0;
    }
    return entropy(lam);
  };
  *s_i = entropy_from(diag_after(r.gamma_a, wi), diag_after(r.gamma_b, wi),
                      os_after(wi));
  *s_j = entropy_from(diag_after(r.gamma_a, wj), diag_after(r.gamma_b, wj),
                      os_after(wj));
}

}  // namespace detail

// Cost of the non-active set after a hypothetical Jacobi step, using the
// cached per-orbital entropies for every orbital the step leaves untouched.
// Summation runs in ascending orbital order, so theta = 0 reproduces the
// cached total bit for bit.
inline double pair_local_fqi(const SpinTracedRDMs& r,
                             const std::vector<char>& is_non_active,
                             const std::vector<double>& base_entropies,
                             const JacobiStep& step) {
  if (static_cast<int>(is_non_active.size()) != r.d ||
      static_cast<int>(base_entropies.size()) != r.d) {
    throw dimension_error("pair_local_fqi: cache size mismatch");
  }
  double s_i = 0.0, s_j = 0.0;
  const bool need_i = is_non_active[step.i], need_j = is_non_active[step.j];
  if (need_i || need_j) {
    detail::pair_entropies_after(r, step.i, step.j, step.theta, &s_i, &s_j);
  }
  double f = 0.0;
  for (int k = 0; k < r.d; ++k) {
    if (!is_non_active[k]) continue;
    if (k == step.i) {
      f += s_i;
    } else if (k == step.j) {
      f += s_j;
    } else {
      f += base_entropies[k];
    }
  }
  return f;
}

inline double pair_local_fqi(const SpinTracedRDMs& r, const CasPartition& part,
                             const std::vector<double>& base_entropies,
                             const JacobiStep& step) {
  std::vector<char> is_n(r.d, 1);
  for (int a : part.active) is_n[a] = 0;
  return pair_local_fqi(r, is_n, base_entropies, step);
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

}  // namespace detail

// Haar-like random orthogonal matrix: QR of a seeded Gaussian matrix with
// the R diagonal forced positive so the factorization (and the result) is
// unique and reproducible.
inline Eigen::MatrixXd random_orthogonal(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = normal(rng);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    if (r(k, k) < 0.0) q.col(k) = -q.col(k);
  }
  return q;
}

// Perturbed basis u0 * exp(scale * A) with A a seeded standard-normal
// antisymmetric generator; the matrix exponential uses scaling-and-squaring
// (Pade) well below 1e-12 accuracy. scale = 0 returns u0 unchanged.
inline Eigen::MatrixXd random_perturbation(const Eigen::MatrixXd& u0,
                                           double scale, std::uint64_t seed) {
  if (u0.rows() != u0.cols()) {
    throw dimension_error("random_perturbation needs a square basis");
  }
  if (scale == 0.0) return u0;
  const int d = static_cast<int>(u0.rows());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double v = normal(rng);
      a(i, j) = v;
      a(j, i) = -v;
    }
  const Eigen::MatrixXd expm = (scale * a).exp();
  return u0 * expm;
}

}  // namespace qicas
