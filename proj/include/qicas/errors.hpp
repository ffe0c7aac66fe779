// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qicas {

// Base class for all library errors so callers can catch one type.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text (FCIDUMP header/body, orbital files, config files).
struct format_error : error {
  using error::error;
};

// Index outside the declared orbital range.
struct range_error : error {
  using error::error;
};

// Repeated integral entries with conflicting values.
struct consistency_error : error {
  using error::error;
};

// Mismatched matrix/vector/tensor dimensions.
struct dimension_error : error {
  using error::error;
};

// Invalid electron count, spin sector, or CAS partition bookkeeping.
struct domain_error : error {
  using error::error;
};

// Request exceeds a hard capacity guard (orbital count, subsystem size).
struct capacity_error : error {
  using error::error;
};

// Density-matrix eigenvalue below the tolerated negative threshold.
struct positivity_error : error {
  using error::error;
};

// Iterative eigensolver failed to reach the residual tolerance.
struct convergence_error : error {
  convergence_error(const std::string& msg, double residual)
      : error(msg), best_residual(residual) {}
  double best_residual;
};

// Projected CAS weight too small to renormalize.
struct projection_error : error {
  using error::error;
};

// Occupancy-based closed/virtual classification is inconsistent with the
// requested electron bookkeeping; carries the offending occupancies.
struct classification_error : error {
  classification_error(const std::string& msg, std::vector<double> occ)
      : error(msg), occupancies(std::move(occ)) {}
  std::vector<double> occupancies;
};

// Threshold diagram has no admissible plateau.
struct plateau_error : error {
  using error::error;
};

}  // namespace qicas
