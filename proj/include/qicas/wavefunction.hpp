// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include "qicas/determinant.hpp"
#include "qicas/errors.hpp"

namespace qicas {

// CI vector over a determinant sector. Coefficients are real; solver output
// is normalized to unit 2-norm.
struct Wavefunction {
  DeterminantSpace space;
  Eigen::VectorXd coeffs;

  double norm() const { return coeffs.norm(); }

  void check_normalized(double tol = 1e-12) const {
    if (std::abs(coeffs.squaredNorm() - 1.0) > tol) {
      throw domain_error("wavefunction is not normalized");
    }
  }
};

}  // namespace qicas
