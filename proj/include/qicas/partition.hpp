// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "qicas/errors.hpp"

namespace qicas {

// Partition of the D orbitals into closed (doubly occupied), active, and
// virtual (empty) sets for a CAS(n_cas, d_cas) treatment. Invariants:
// the three sets are disjoint and cover 0..D-1, |active| = d_cas, and
// n_cas = n_elec - 2*|closed| >= 0.
struct CasPartition {
  int n_cas = 0;
  std::vector<int> closed;
  std::vector<int> active;
  std::vector<int> virt;

  int d_cas() const { return static_cast<int>(active.size()); }
  int n_orbitals() const {
    return static_cast<int>(closed.size() + active.size() + virt.size());
  }

  void validate(int d, int n_elec) const {
    std::set<int> all;
    auto absorb = [&](const std::vector<int>& v, const char* name) {
      for (int i : v) {
        if (i < 0 || i >= d) {
          throw domain_error(std::string("partition index out of range in ") +
                             name);
        }
        if (!all.insert(i).second) {
          throw domain_error(std::string("partition sets overlap at index ") +
                             std::to_string(i));
        }
      }
    };
    absorb(closed, "closed");
    absorb(active, "active");
    absorb(virt, "virtual");
    if (static_cast<int>(all.size()) != d) {
      throw domain_error("partition sets must cover all orbitals");
    }
    if (n_cas < 0) throw domain_error("n_cas must be nonnegative");
    if (n_cas != n_elec - 2 * static_cast<int>(closed.size())) {
      throw domain_error("n_cas inconsistent with electron count and closed set");
    }
    if (n_cas > 2 * d_cas()) {
      throw domain_error("active space too small for n_cas electrons");
    }
  }
};

// Contiguous convention: closed orbitals first, then active, then virtual.
inline CasPartition contiguous_partition(int d, int n_elec, int n_cas,
                                         int d_cas) {
  if ((n_elec - n_cas) % 2 != 0 || n_elec < n_cas) {
    throw domain_error("n_elec - n_cas must be a nonnegative even number");
  }
  const int n_closed = (n_elec - n_cas) / 2;
  if (n_closed + d_cas > d) {
    throw domain_error("closed + active orbitals exceed orbital count");
  }
  CasPartition p;
  p.n_cas = n_cas;
  for (int i = 0; i < n_closed; ++i) p.closed.push_back(i);
  for (int i = n_closed; i < n_closed + d_cas; ++i) p.active.push_back(i);
  for (int i = n_closed + d_cas; i < d; ++i) p.virt.push_back(i);
  p.validate(d, n_elec);
  return p;
}

// Same split but with an explicit active index set.
inline CasPartition partition_with_active(int d, int n_elec, int n_cas,
                                          const std::vector<int>& active) {
  if ((n_elec - n_cas) % 2 != 0 || n_elec < n_cas) {
    throw domain_error("n_elec - n_cas must be a nonnegative even number");
  }
  const int n_closed = (n_elec - n_cas) / 2;
  CasPartition p;
  p.n_cas = n_cas;
  p.active = active;
  std::sort(p.active.begin(), p.active.end());
  std::vector<int> rest;
  for (int i = 0; i < d; ++i) {
    if (!std::binary_search(p.active.begin(), p.active.end(), i)) {
      rest.push_back(i);
    }
  }
  if (static_cast<int>(rest.size()) < n_closed) {
    throw domain_error("not enough non-active orbitals for the closed set");
  }
  p.closed.assign(rest.begin(), rest.begin() + n_closed);
  p.virt.assign(rest.begin() + n_closed, rest.end());
  p.validate(d, n_elec);
  return p;
}

}  // namespace qicas
