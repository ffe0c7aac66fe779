// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "frozen.hpp"
#include "qicas/correlation.hpp"
#include "qicas/fci.hpp"
#include "qicas/rdm.hpp"
#include "qicas/rotation.hpp"

using Catch::Matchers::WithinAbs;

namespace {

const double kPi = std::acos(-1.0);

qicas::SpinTracedRDMs chain4_rdms() {
  const qicas::MolecularHamiltonian h = qicas::build_hubbard(4, 1.0, 4.0, 4);
  return qicas::compute_rdms(qicas::ground_state(h).psi);
}

}  // namespace

TEST_CASE("planar rotation matrix", "[rotation]") {
  REQUIRE((qicas::jacobi_matrix(3, 0, 2, 0.0) -
           Eigen::MatrixXd::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() == 0.0);

  const Eigen::MatrixXd u = qicas::jacobi_matrix(2, 0, 1, kPi / 2.0);
  REQUIRE_THAT(u(0, 0), WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(u(0, 1), WithinAbs(1.0, 1e-15));
  REQUIRE_THAT(u(1, 0), WithinAbs(-1.0, 1e-15));

  // Same-plane rotations compose by adding angles.
  const Eigen::MatrixXd a = qicas::jacobi_matrix(4, 1, 3, 0.3);
  const Eigen::MatrixXd b = qicas::jacobi_matrix(4, 1, 3, 0.5);
  REQUIRE((a * b - qicas::jacobi_matrix(4, 1, 3, 0.8)).cwiseAbs().maxCoeff() <
          1e-15);

  REQUIRE_THROWS_AS(qicas::jacobi_matrix(3, 1, 1, 0.1), qicas::domain_error);
  REQUIRE_THROWS_AS(qicas::jacobi_matrix(3, 0, 3, 0.1), qicas::domain_error);
}

TEST_CASE("one-body matrix rotation", "[rotation]") {
  const qicas::MolecularHamiltonian h = qicas::build_hubbard(2, 1.0, 4.0, 2);
  const qicas::SpinTracedRDMs r =
      qicas::compute_rdms(qicas::ground_state(h).psi);

  SECTION("identity is a no-op") {
    REQUIRE((qicas::rotate_1rdm(r.gamma_a, Eigen::MatrixXd::Identity(2, 2)) -
             r.gamma_a)
                .cwiseAbs()
                .maxCoeff() == 0.0);
  }
  SECTION("trace is invariant") {
    const Eigen::MatrixXd u = qicas::random_orthogonal(2, 11);
    REQUIRE_THAT(qicas::rotate_1rdm(r.gamma_a, u).trace(),
                 WithinAbs(r.gamma_a.trace(), 1e-12));
  }
  SECTION("the bonding rotation diagonalizes the dimer matrix") {
    const Eigen::MatrixXd u = qicas::jacobi_matrix(2, 0, 1, kPi / 4.0);
    const Eigen::MatrixXd g = qicas::rotate_1rdm(r.gamma_a, u);
    REQUIRE_THAT(g(0, 0), WithinAbs(frozen::kDimerNatOccHighSpin, 1e-10));
    REQUIRE_THAT(g(1, 1), WithinAbs(frozen::kDimerNatOccLowSpin, 1e-10));
    REQUIRE_THAT(g(0, 1), WithinAbs(0.0, 1e-10));
  }
  SECTION("dimension guard") {
    REQUIRE_THROWS_AS(
        qicas::rotate_1rdm(r.gamma_a, Eigen::MatrixXd::Identity(3, 3)),
        qicas::dimension_error);
  }
}

TEST_CASE("rank-4 tensor rotation", "[rotation]") {
  const qicas::SpinTracedRDMs r = chain4_rdms();

  SECTION("identity is a no-op") {
    const std::vector<double> g =
        qicas::rotate_os_2rdm(r.gamma_os, Eigen::MatrixXd::Identity(4, 4));
    REQUIRE(g == r.gamma_os);
  }
  SECTION("rotations compose") {
    const Eigen::MatrixXd u1 = qicas::random_orthogonal(4, 5);
    const Eigen::MatrixXd u2 = qicas::random_orthogonal(4, 6);
    const std::vector<double> two_step =
        qicas::rotate_os_2rdm(qicas::rotate_os_2rdm(r.gamma_os, u1), u2);
    const std::vector<double> once =
        qicas::rotate_os_2rdm(r.gamma_os, u2 * u1);
    double diff = 0.0;
    for (std::size_t k = 0; k < once.size(); ++k) {
      diff = std::max(diff, std::abs(once[k] - two_step[k]));
    }
    REQUIRE(diff < 1e-10);
  }
}

TEST_CASE("rotated densities agree with a re-solved ground state",
          "[rotation]") {
  const qicas::MolecularHamiltonian h = qicas::build_hubbard(4, 1.0, 4.0, 4);
  const qicas::GroundState gs = qicas::ground_state(h);
  const qicas::SpinTracedRDMs r = qicas::compute_rdms(gs.psi);

  const Eigen::MatrixXd u = qicas::random_orthogonal(4, 7);
  const qicas::SpinTracedRDMs rotated = qicas::rotate_rdms(r, u);

  const qicas::MolecularHamiltonian ht = qicas::transform_integrals(h, u);
  const qicas::GroundState gt = qicas::ground_state(ht);
  REQUIRE_THAT(gt.energy, WithinAbs(gs.energy, 1e-9));
  const qicas::SpinTracedRDMs resolved = qicas::compute_rdms(gt.psi);

  REQUIRE((rotated.gamma_a - resolved.gamma_a).cwiseAbs().maxCoeff() < 1e-8);
  REQUIRE((rotated.gamma_b - resolved.gamma_b).cwiseAbs().maxCoeff() < 1e-8);
  double os_diff = 0.0;
  for (std::size_t k = 0; k < rotated.gamma_os.size(); ++k) {
    os_diff = std::max(os_diff,
                       std::abs(rotated.gamma_os[k] - resolved.gamma_os[k]));
  }
  REQUIRE(os_diff < 1e-8);
}

TEST_CASE("in-place planar updates match the full-matrix path", "[rotation]") {
  const qicas::SpinTracedRDMs r = chain4_rdms();
  const int i = 1, j = 3;
  const double theta = 0.7;
  const double c = std::cos(theta), s = std::sin(theta);
  const Eigen::MatrixXd u = qicas::jacobi_matrix(4, i, j, theta);

  Eigen::MatrixXd m = r.gamma_a;
  qicas::detail::apply_jacobi_sym(m, i, j, c, s);
  REQUIRE((m - qicas::rotate_1rdm(r.gamma_a, u)).cwiseAbs().maxCoeff() <
          1e-12);

  std::vector<double> g = r.gamma_os;
  qicas::detail::apply_jacobi_rank4(g, 4, i, j, c, s);
  const std::vector<double> full = qicas::rotate_os_2rdm(r.gamma_os, u);
  double diff = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    diff = std::max(diff, std::abs(g[k] - full[k]));
  }
  REQUIRE(diff < 1e-12);
}

TEST_CASE("accumulated rotation and drift control", "[rotation]") {
  qicas::OrbitalRotation rot = qicas::OrbitalRotation::identity(4);
  rot.apply_jacobi(0, 2, 0.4);
  rot.apply_jacobi(1, 3, -0.2);
  const Eigen::MatrixXd expect = qicas::jacobi_matrix(4, 1, 3, -0.2) *
                                 qicas::jacobi_matrix(4, 0, 2, 0.4);
  REQUIRE((rot.u - expect).cwiseAbs().maxCoeff() < 1e-14);

  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> angle(-0.3, 0.3);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int step = 0; step < 10000; ++step) {
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    rot.apply_jacobi(i, j, angle(rng));
  }
  REQUIRE(rot.orthogonality_defect() < 1e-10);
  rot.reorthonormalize();
  REQUIRE(rot.orthogonality_defect() < 1e-14);
}

TEST_CASE("pair-local cost evaluation", "[rotation]") {
  const qicas::SpinTracedRDMs r = chain4_rdms();
  const qicas::CasPartition part =
      qicas::partition_with_active(4, 4, 2, {1, 2});
  std::vector<double> base(4);
  for (int k = 0; k < 4; ++k) base[k] = qicas::orbital_entropy(r, k);
  const double cached = base[0] + base[3];

  SECTION("zero angle reproduces the cache bit for bit") {
    REQUIRE(qicas::pair_local_fqi(r, part, base, {0, 2, 0.0}) == cached);
    REQUIRE(qicas::pair_local_fqi(r, part, base, {0, 3, 0.0}) == cached);
  }
  SECTION("matches rotate-then-evaluate") {
    for (double theta : {0.17, 1.2, 2.9}) {
      for (auto [i, j] : {std::pair{0, 2}, std::pair{0, 3}, std::pair{1, 2}}) {
        const qicas::SpinTracedRDMs rt =
            qicas::rotate_rdms(r, qicas::jacobi_matrix(4, i, j, theta));
        const double direct = qicas::f_qi(rt, part);
        const double local =
            qicas::pair_local_fqi(r, part, base, {i, j, theta});
        REQUIRE_THAT(local, WithinAbs(direct, 1e-12));
      }
    }
  }
  SECTION("pi periodicity") {
    const double a = qicas::pair_local_fqi(r, part, base, {0, 2, 0.9});
    const double b =
        qicas::pair_local_fqi(r, part, base, {0, 2, 0.9 + kPi});
    REQUIRE_THAT(a, WithinAbs(b, 1e-12));
  }
  SECTION("cache size guard") {
    std::vector<double> short_cache(3, 0.0);
    REQUIRE_THROWS_AS(
        qicas::pair_local_fqi(r, part, short_cache, {0, 2, 0.1}),
        qicas::dimension_error);
  }
}

TEST_CASE("seeded random bases", "[rotation]") {
  SECTION("orthogonal and reproducible") {
    const Eigen::MatrixXd u = qicas::random_orthogonal(5, 42);
    REQUIRE((u.transpose() * u - Eigen::MatrixXd::Identity(5, 5))
                .cwiseAbs()
                .maxCoeff() < 1e-13);
    REQUIRE((qicas::random_orthogonal(5, 42) - u).cwiseAbs().maxCoeff() ==
            0.0);
    REQUIRE((qicas::random_orthogonal(5, 43) - u).cwiseAbs().maxCoeff() >
            1e-3);
  }
  SECTION("perturbation") {
    const Eigen::MatrixXd u0 = qicas::random_orthogonal(4, 3);
    REQUIRE((qicas::random_perturbation(u0, 0.0, 9) - u0)
                .cwiseAbs()
                .maxCoeff() == 0.0);
    const Eigen::MatrixXd v = qicas::random_perturbation(u0, 0.2, 9);
    REQUIRE((v.transpose() * v - Eigen::MatrixXd::Identity(4, 4))
                .cwiseAbs()
                .maxCoeff() < 1e-12);
    REQUIRE((qicas::random_perturbation(u0, 0.2, 9) - v)
                .cwiseAbs()
                .maxCoeff() == 0.0);
    REQUIRE((qicas::random_perturbation(u0, 0.2, 10) - v)
                .cwiseAbs()
                .maxCoeff() > 1e-6);
    // Small generator keeps the result near the center.
    REQUIRE((qicas::random_perturbation(u0, 1e-4, 9) - u0)
                .cwiseAbs()
                .maxCoeff() < 1e-3);
  }
  SECTION("stream mixing separates consumers") {
    const std::uint64_t a = qicas::detail::mix_seed(1, 0);
    const std::uint64_t b = qicas::detail::mix_seed(1, 1);
    const std::uint64_t c = qicas::detail::mix_seed(2, 0);
    REQUIRE(a != b);
    REQUIRE(a != c);
    REQUIRE(b != c);
  }
}
