// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "qicas/errors.hpp"

namespace qicas {

// Slater determinants for a fixed (n_alpha, n_beta) sector, each stored as
// a pair of orbital-occupation bitmasks. A determinant is the Fock state
//   prod_{i in alpha, ascending} c+_{i,up} prod_{j in beta, ascending} c+_{j,dn} |vac>,
// i.e. all alpha modes precede all beta modes; with that convention the
// excitation sign of one spin channel never depends on the other channel.
struct DeterminantSpace {
  int d = 0;
  int n_alpha = 0;
  int n_beta = 0;
  std::vector<std::uint64_t> alpha_strings;  // ascending numeric order
  std::vector<std::uint64_t> beta_strings;
  std::unordered_map<std::uint64_t, std::int64_t> alpha_rank;
  std::unordered_map<std::uint64_t, std::int64_t> beta_rank;

  std::int64_t size() const {
    return static_cast<std::int64_t>(alpha_strings.size()) *
           static_cast<std::int64_t>(beta_strings.size());
  }

  // Global index in lexicographic (alpha, beta) order.
  std::int64_t index(std::uint64_t a, std::uint64_t b) const {
    return alpha_rank.at(a) * static_cast<std::int64_t>(beta_strings.size()) +
           beta_rank.at(b);
  }

  std::uint64_t alpha_of(std::int64_t idx) const {
    return alpha_strings[static_cast<std::size_t>(
        idx / static_cast<std::int64_t>(beta_strings.size()))];
  }
  std::uint64_t beta_of(std::int64_t idx) const {
    return beta_strings[static_cast<std::size_t>(
        idx % static_cast<std::int64_t>(beta_strings.size()))];
  }
};

namespace detail {

// All d-bit masks with k bits set, ascending numeric order.
inline std::vector<std::uint64_t> bit_strings(int d, int k) {
  std::vector<std::uint64_t> out;
  if (k < 0 || k > d) return out;
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  std::uint64_t v = (k == 64) ? ~0ULL : ((1ULL << k) - 1);
  const std::uint64_t limit = (d == 64) ? ~0ULL : (1ULL << d);
  while (v < limit) {
    out.push_back(v);
    // Gosper's hack: next value with the same popcount.
    const std::uint64_t c = v & (~v + 1);
    const std::uint64_t r = v + c;
    if (r == 0) break;
    v = (((r ^ v) >> 2) / c) | r;
  }
  return out;
}

// Parity of occupied modes strictly between positions p and r.
inline int excitation_sign(std::uint64_t mask, int p, int r) {
  if (p == r) return 1;
  const int lo = std::min(p, r), hi = std::max(p, r);
  std::uint64_t between = mask;
  between &= (hi >= 63) ? ~0ULL : ((1ULL << hi) - 1);
  between &= ~((1ULL << (lo + 1)) - 1);
  return (std::popcount(between) & 1) ? -1 : 1;
}

}  // namespace detail

// Enumerate the (n_alpha, n_beta) sector; sizes are binomial(d, n_alpha) *
// binomial(d, n_beta). The zero-orbital space holds the single vacuum
// determinant.
inline DeterminantSpace enumerate_determinants(int d, int n_alpha,
                                               int n_beta) {
  if (d < 0 || d > 20) throw capacity_error("orbital count must be in [0, 20]");
  if (n_alpha < 0 || n_beta < 0 || n_alpha > d || n_beta > d) {
    throw domain_error("electron counts must lie in [0, d]");
  }
  DeterminantSpace s;
  s.d = d;
  s.n_alpha = n_alpha;
  s.n_beta = n_beta;
  s.alpha_strings = detail::bit_strings(d, n_alpha);
  s.beta_strings = detail::bit_strings(d, n_beta);
  s.alpha_rank.reserve(s.alpha_strings.size());
  s.beta_rank.reserve(s.beta_strings.size());
  for (std::size_t i = 0; i < s.alpha_strings.size(); ++i) {
    s.alpha_rank.emplace(s.alpha_strings[i], static_cast<std::int64_t>(i));
  }
  for (std::size_t i = 0; i < s.beta_strings.size(); ++i) {
    s.beta_rank.emplace(s.beta_strings[i], static_cast<std::int64_t>(i));
  }
  return s;
}

// Sector parameters from total electron count and spin projection:
// n_alpha = (n_elec + ms2) / 2.
inline std::pair<int, int> sector_occupations(int n_elec, int ms2, int d) {
  if ((n_elec + ms2) % 2 != 0) {
    throw domain_error("n_elec and ms2 must have equal parity");
  }
  const int n_alpha = (n_elec + ms2) / 2;
  const int n_beta = n_elec - n_alpha;
  if (n_alpha < 0 || n_beta < 0 || n_alpha > d || n_beta > d) {
    throw domain_error("spin sector incompatible with orbital count");
  }
  return {n_alpha, n_beta};
}

}  // namespace qicas
