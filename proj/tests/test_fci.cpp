// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "frozen.hpp"
#include "oracle.hpp"
#include "qicas/fci.hpp"
#include "qicas/partition.hpp"
#include "qicas/rotation.hpp"

using Catch::Matchers::WithinAbs;

namespace {

// Oracle basis in the library's own determinant order so vectors compare
// element by element. Mode order: alpha block below beta block.
oracle::SectorBasis mirror_basis(const qicas::DeterminantSpace& s) {
  std::vector<std::uint64_t> masks;
  masks.reserve(static_cast<std::size_t>(s.size()));
  for (std::int64_t k = 0; k < s.size(); ++k) {
    masks.push_back(s.alpha_of(k) | (s.beta_of(k) << s.d));
  }
  return oracle::with_masks(s.d, s.n_alpha, s.n_beta, masks);
}

}  // namespace

TEST_CASE("dimer ground state", "[fci]") {
  const qicas::MolecularHamiltonian h = qicas::build_hubbard(2, 1.0, 4.0, 2);
  const qicas::GroundState gs = qicas::ground_state(h);

  // Oracle first: dense diagonalization of the 4-determinant sector.
  const oracle::SectorBasis b = oracle::enumerate(2, 1, 1);
  double e_oracle = 0.0;
  oracle::lowest_state(oracle::dense_hamiltonian(h, b), &e_oracle);
  REQUIRE_THAT(e_oracle, WithinAbs(frozen::kDimerE0, 1e-12));

  REQUIRE_THAT(gs.energy, WithinAbs(frozen::kDimerE0, 1e-12));
  REQUIRE_THAT(gs.psi.norm(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("noninteracting dimer energy", "[fci]") {
  const qicas::MolecularHamiltonian h = qicas::build_hubbard(2, 1.0, 0.0, 2);
  REQUIRE_THAT(qicas::ground_state(h).energy, WithinAbs(-2.0, 1e-12));
}

TEST_CASE("bonding determinant is an eigenvector at u=0", "[fci]") {
  // After the pi/4 rotation the hopping is diag(-1, +1); the determinant
  // with both electrons in orbital 0 satisfies H c = -2 c.
  const qicas::MolecularHamiltonian h = qicas::build_hubbard(2, 1.0, 0.0, 2);
  const qicas::MolecularHamiltonian hb = qicas::transform_integrals(
      h, qicas::jacobi_matrix(2, 0, 1, std::acos(-1.0) / 4.0));
  const qicas::DeterminantSpace space = qicas::enumerate_determinants(2, 1, 1);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(space.size());
  c(space.index(0b01, 0b01)) = 1.0;
  const Eigen::VectorXd hc = qicas::apply_hamiltonian(hb, space, c);
  REQUIRE((hc + 2.0 * c).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("matrix-free product matches the dense oracle", "[fci]") {
  const qicas::MolecularHamiltonian h = qicas::build_hubbard(4, 1.0, 4.0, 4);
  const qicas::DeterminantSpace space = qicas::enumerate_determinants(4, 2, 2);
  const oracle::SectorBasis b = mirror_basis(space);
  const Eigen::MatrixXd hmat = oracle::dense_hamiltonian(h, b);
  REQUIRE((hmat - hmat.transpose()).cwiseAbs().maxCoeff() < 1e-12);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd c(space.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = gauss(rng);
  c.normalize();

  const Eigen::VectorXd lib = qicas::apply_hamiltonian(h, space, c);
  const Eigen::VectorXd ref = hmat * c;
  REQUIRE((lib - ref).cwiseAbs().maxCoeff() < 1e-10);
  REQUIRE_THAT(c.dot(lib), WithinAbs(c.dot(ref), 1e-10));

  double e0 = 0.0;
  const Eigen::VectorXd v0 = oracle::lowest_state(hmat, &e0);
  const Eigen::VectorXd hv0 = qicas::apply_hamiltonian(h, space, v0);
  REQUIRE((hv0 - e0 * v0).norm() < 1e-10);
}

TEST_CASE("six-site chain matches the dense oracle", "[fci]") {
  const qicas::MolecularHamiltonian h = qicas::build_hubbard(6, 1.0, 4.0, 6);
  const qicas::GroundState gs = qicas::ground_state(h);
  const oracle::SectorBasis b = oracle::enumerate(6, 3, 3);
  REQUIRE(b.size() == 400);
  double e_oracle = 0.0;
  oracle::lowest_state(oracle::dense_hamiltonian(h, b), &e_oracle);
  REQUIRE_THAT(gs.energy, WithinAbs(e_oracle, 1e-9));
}

TEST_CASE("energy is invariant under orthogonal transforms", "[fci]") {
  const qicas::MolecularHamiltonian h = qicas::build_hubbard(4, 1.0, 4.0, 4);
  const double e0 = qicas::ground_state(h).energy;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Eigen::MatrixXd u = qicas::random_orthogonal(4, seed);
    const double e = qicas::ground_state(qicas::transform_integrals(h, u))
                         .energy;
    REQUIRE_THAT(e, WithinAbs(e0, 1e-9));
  }
}

TEST_CASE("spectral bounds", "[fci]") {
  SECTION("interacting dimer") {
    const qicas::MolecularHamiltonian h =
        qicas::build_hubbard(2, 1.0, 4.0, 2);
    const qicas::SpectralBounds b = qicas::spectral_bounds(h);
    REQUIRE_THAT(b.e_min, WithinAbs(frozen::kDimerE0, 1e-10));
    REQUIRE_THAT(b.e_max, WithinAbs(frozen::kDimerEMax, 1e-10));
  }
  SECTION("noninteracting dimer is symmetric") {
    const qicas::MolecularHamiltonian h =
        qicas::build_hubbard(2, 1.0, 0.0, 2);
    const qicas::SpectralBounds b = qicas::spectral_bounds(h);
    REQUIRE_THAT(b.e_min, WithinAbs(-2.0, 1e-10));
    REQUIRE_THAT(b.e_max, WithinAbs(2.0, 1e-10));
    REQUIRE(b.e_max >= b.e_min);
  }
}

TEST_CASE("projection onto conforming determinants", "[fci]") {
  const qicas::MolecularHamiltonian h = qicas::build_hubbard(2, 1.0, 4.0, 2);
  const qicas::GroundState gs = qicas::ground_state(h);

  SECTION("all-active projection is the identity") {
    const qicas::CasPartition part =
        qicas::contiguous_partition(2, 2, 2, 2);
    const qicas::ProjectionResult pr = qicas::project_cas(gs.psi, part);
    REQUIRE_THAT(pr.weight, WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(pr.epsilon, WithinAbs(0.0, 1e-12));
    REQUIRE((pr.psi.coeffs - gs.psi.coeffs).cwiseAbs().maxCoeff() < 1e-12);
  }

  SECTION("single active site keeps only the doubly occupied determinant") {
    // Weight equals the double-occupancy probability of site 0.
    const qicas::CasPartition part =
        qicas::partition_with_active(2, 2, 2, {0});
    const qicas::ProjectionResult pr = qicas::project_cas(gs.psi, part);
    REQUIRE_THAT(pr.weight, WithinAbs(frozen::kDimerDoubleOcc, 1e-9));
    REQUIRE_THAT(pr.epsilon, WithinAbs(1.0 - frozen::kDimerDoubleOcc, 1e-9));
    REQUIRE_THAT(pr.psi.norm(), WithinAbs(1.0, 1e-12));
  }

  SECTION("conforming single determinant has weight one") {
    const qicas::DeterminantSpace space =
        qicas::enumerate_determinants(2, 1, 1);
    qicas::Wavefunction det{space, Eigen::VectorXd::Zero(space.size())};
    det.coeffs(space.index(0b01, 0b01)) = 1.0;
    const qicas::CasPartition part =
        qicas::partition_with_active(2, 2, 2, {0});
    REQUIRE_THAT(qicas::project_cas(det, part).weight,
                 WithinAbs(1.0, 1e-14));
  }

  SECTION("empty projection is an error") {
    // Demanding a doubly occupied closed orbital that the state never fills.
    const qicas::MolecularHamiltonian h0 =
        qicas::build_hubbard(2, 1.0, 0.0, 2);
    const qicas::MolecularHamiltonian hb = qicas::transform_integrals(
        h0, qicas::jacobi_matrix(2, 0, 1, std::acos(-1.0) / 4.0));
    const qicas::GroundState g0 = qicas::ground_state(hb);
    qicas::CasPartition part;
    part.n_cas = 0;
    part.closed = {1};  // the empty antibonding orbital
    part.virt = {0};
    REQUIRE_THROWS_AS(qicas::project_cas(g0.psi, part),
                      qicas::projection_error);
  }
}

TEST_CASE("solver guard rails", "[fci]") {
  const qicas::MolecularHamiltonian h = qicas::build_hubbard(6, 1.0, 4.0, 6);
  SECTION("iteration cap raises with the best residual attached") {
    qicas::SolverOptions opts;
    opts.max_iter = 2;
    try {
      qicas::ground_state(h, opts);
      FAIL("expected convergence_error");
    } catch (const qicas::convergence_error& e) {
      REQUIRE(e.best_residual > 0.0);
    }
  }
  SECTION("space-dimension cap") {
    qicas::SolverOptions opts;
    opts.max_space_dim = 100;
    REQUIRE_THROWS_AS(qicas::ground_state(h, opts), qicas::capacity_error);
  }
}
