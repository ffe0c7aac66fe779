// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "qicas/correlation.hpp"
#include "qicas/errors.hpp"
#include "qicas/partition.hpp"
#include "qicas/rdm.hpp"
#include "qicas/rotation.hpp"

namespace qicas {

// Pair admission rule for the Jacobi sweep: `either` scans pairs with at
// least one non-active orbital, `exclusive` only pairs straddling the
// active/non-active boundary.
enum class PairScope { either, exclusive };

struct QicasConfig {
  double eps1 = 1e-8;        // minimum improvement to accept a step
  double eps2 = 1e-7;        // per-cycle improvement stopping threshold
  int n_cycle = 200;         // sweep cap
  double coarse_step = 1e-2; // angle grid over [0, pi)
  double fine_step = 1e-4;   // refinement grid over [best-coarse, best+coarse]
  PairScope scope = PairScope::either;
  int restarts = 1;          // restart 0 starts from the input basis
  std::uint64_t seed = 0;    // drives shuffles and restart bases
};

struct QicasResult {
  double f_star = 0.0;
  Eigen::MatrixXd u_star;              // rows: optimized orbitals
  CasPartition partition;              // reclassified, canonical order
  SpinTracedRDMs rdms;                 // rotated into the optimized basis
  std::vector<JacobiStep> accepted_steps;
  std::vector<double> step_f;          // cost after each accepted step
  std::vector<double> history;         // cost per cycle, history[0] initial
  int cycles = 0;
  int winning_restart = 0;
};

// Occupancy-based classification of the non-active orbitals: occupancy > 1
// marks closed, otherwise virtual. The closed count must reproduce
// (n_elec - n_cas) / 2 or the bookkeeping is rejected with the occupancies
// attached for diagnosis.
inline CasPartition classify_partition(const Eigen::MatrixXd& gamma_a,
                                       const Eigen::MatrixXd& gamma_b,
                                       int n_elec, int n_cas,
                                       const std::vector<int>& active) {
  const int d = static_cast<int>(gamma_a.rows());
  std::vector<char> is_active(d, 0);
  for (int a : active) {
    if (a < 0 || a >= d) throw range_error("active index out of range");
    is_active[a] = 1;
  }
  std::vector<double> occ(d);
  for (int i = 0; i < d; ++i) occ[i] = gamma_a(i, i) + gamma_b(i, i);
  CasPartition p;
  p.n_cas = n_cas;
  p.active = active;
  std::sort(p.active.begin(), p.active.end());
  for (int i = 0; i < d; ++i) {
    if (is_active[i]) continue;
    (occ[i] > 1.0 ? p.closed : p.virt).push_back(i);
  }
  const int expected_closed = (n_elec - n_cas) / 2;
  if ((n_elec - n_cas) % 2 != 0 ||
      static_cast<int>(p.closed.size()) != expected_closed) {
    throw classification_error(
        "occupancy classification found " + std::to_string(p.closed.size()) +
            " closed orbitals, expected " + std::to_string(expected_closed),
        occ);
  }
  return p;
}

namespace detail {

struct SweepOutcome {
  double f = 0.0;
  std::vector<JacobiStep> accepted;
  std::vector<double> step_f;
  std::vector<double> history;
  int cycles = 0;
};

// One full coordinate-descent minimization of the summed non-active
// entropies. Per admitted pair: coarse scan of [0, pi), then a fine scan of
// [best - coarse_step, best + coarse_step]; the step is kept only when it
// improves the running cost by more than eps1. Cycles repeat with
// reshuffled pair order until the per-cycle gain drops below eps2 or the
// cycle cap is reached. `rdms` and `rot` are updated in place.
inline SweepOutcome jacobi_sweeps(SpinTracedRDMs& rdms, OrbitalRotation& rot,
                                  const std::vector<char>& is_n,
                                  const QicasConfig& cfg, std::mt19937_64& rng) {
  const int d = rdms.d;
  std::vector<double> cache(d, 0.0);
  auto refresh_cache = [&](int only_i, int only_j) {
    for (int k = 0; k < d; ++k) {
      if (only_i >= 0 && k != only_i && k != only_j) continue;
      cache[k] = orbital_entropy(rdms, k);
    }
  };
  refresh_cache(-1, -1);
  auto total = [&]() {
    double f = 0.0;
    for (int k = 0; k < d; ++k) {
      if (is_n[k]) f += cache[k];
    }
    return f;
  };

  SweepOutcome out;
  double current = total();
  out.history.push_back(current);

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);

  const int n_coarse = static_cast<int>(std::floor(
                           (std::acos(-1.0) - 1e-12) / cfg.coarse_step)) + 1;
  for (int cycle = 1; cycle <= cfg.n_cycle; ++cycle) {
    std::shuffle(order.begin(), order.end(), rng);
    const double cycle_start = current;
    for (int a = 0; a < d; ++a) {
      for (int b = a + 1; b < d; ++b) {
        const int i = order[a], j = order[b];
        const bool i_n = is_n[i], j_n = is_n[j];
        if (cfg.scope == PairScope::either) {
          if (!i_n && !j_n) continue;
        } else {
          if (i_n == j_n) continue;  // exactly one side non-active
        }
        // Active-active pairs never change the cost; `either` admits any
        // pair with a non-active member, including non-active pairs whose
        // rotation redistributes entropy inside N.
        double best_theta = 0.0;
        double best_f = current;
        for (int k = 0; k < n_coarse; ++k) {
          const double theta = k * cfg.coarse_step;
          const double f =
              pair_local_fqi(rdms, is_n, cache, {i, j, theta});
          if (f < best_f) {
            best_f = f;
            best_theta = theta;
          }
        }
        const int n_fine =
            static_cast<int>(std::llround(2.0 * cfg.coarse_step /
                                          cfg.fine_step)) + 1;
        const double fine_lo = best_theta - cfg.coarse_step;
        for (int k = 0; k < n_fine; ++k) {
          const double theta = fine_lo + k * cfg.fine_step;
          const double f =
              pair_local_fqi(rdms, is_n, cache, {i, j, theta});
          if (f < best_f) {
            best_f = f;
            best_theta = theta;
          }
        }
        if (current - best_f > cfg.eps1) {
          const double c = std::cos(best_theta), s = std::sin(best_theta);
          apply_jacobi_sym(rdms.gamma_a, i, j, c, s);
          apply_jacobi_sym(rdms.gamma_b, i, j, c, s);
          apply_jacobi_rank4(rdms.gamma_os, d, i, j, c, s);
          rot.apply_jacobi(i, j, best_theta);
          if (rot.orthogonality_defect() > 1e-8) rot.reorthonormalize();
          refresh_cache(i, j);
          current = total();
          out.accepted.push_back({i, j, best_theta});
          out.step_f.push_back(current);
        }
      }
    }
    out.history.push_back(current);
    out.cycles = cycle;
    if (cycle_start - current < cfg.eps2) break;
  }
  out.f = current;
  return out;
}

}  // namespace detail

// Minimize the summed non-active single-orbital entropies over orbital
// rotations by randomized Jacobi coordinate descent. Restart 0 starts from
// the input basis; further restarts prepend a seeded random orthogonal
// basis. The best restart wins (ties keep the earliest). The result is
// reported in a canonical order: closed, active, virtual blocks, each
// sorted by descending occupancy.
inline QicasResult optimize(const SpinTracedRDMs& rdms_in,
                            const CasPartition& part, const QicasConfig& cfg) {
  const int d = rdms_in.d;
  const int n_elec = part.n_cas + 2 * static_cast<int>(part.closed.size());
  part.validate(d, n_elec);
  if (cfg.restarts < 1) throw domain_error("restarts must be >= 1");

  std::vector<char> is_n(d, 1);
  for (int a : part.active) is_n[a] = 0;

  QicasResult best;
  bool have_best = false;
  for (int r = 0; r < cfg.restarts; ++r) {
    SpinTracedRDMs rdms = rdms_in;
    OrbitalRotation rot = OrbitalRotation::identity(d);
    if (r > 0) {
      const Eigen::MatrixXd u0 =
          random_orthogonal(d, detail::mix_seed(cfg.seed, 2 * r + 1));
      rdms = rotate_rdms(rdms_in, u0);
      rot.u = u0;
    }
    std::mt19937_64 rng(detail::mix_seed(cfg.seed, 2 * r));
    detail::SweepOutcome sweep =
        detail::jacobi_sweeps(rdms, rot, is_n, cfg, rng);
    if (!have_best || sweep.f < best.f_star) {
      best.f_star = sweep.f;
      best.u_star = rot.u;
      best.rdms = std::move(rdms);
      best.accepted_steps = std::move(sweep.accepted);
      best.step_f = std::move(sweep.step_f);
      best.history = std::move(sweep.history);
      best.cycles = sweep.cycles;
      best.winning_restart = r;
      have_best = true;
    }
  }

  // Classify the optimized non-active orbitals by occupancy, then permute
  // everything into the canonical block order. Degenerate optima can park a
  // pure doubly-occupied orbital in a non-active slot (and an empty one in
  // the active set) with no cost signal: the entropies of both assignments
  // coincide. When strict classification rejects the optimum, relabel all
  // orbitals by descending occupancy; if the relabeling is cost-neutral up
  // to eps1, adopt it, otherwise resume the descent under the corrected
  // labels. The loop is bounded: each relabel round either fixes the
  // bookkeeping or strictly lowers the cost of a fresh sweep.
  std::vector<int> active_idx(part.active);
  CasPartition classified;
  for (int round = 0;; ++round) {
    try {
      classified = classify_partition(best.rdms.gamma_a, best.rdms.gamma_b,
                                      n_elec, part.n_cas, active_idx);
      break;
    } catch (const classification_error&) {
      if (round >= d) throw;
      std::vector<int> order(d);
      std::iota(order.begin(), order.end(), 0);
      std::vector<double> occ0(d);
      for (int i = 0; i < d; ++i) {
        occ0[i] = best.rdms.gamma_a(i, i) + best.rdms.gamma_b(i, i);
      }
      std::stable_sort(order.begin(), order.end(),
                       [&](int x, int y) { return occ0[x] > occ0[y]; });
      const int nc = (n_elec - part.n_cas) / 2;
      const int dc = static_cast<int>(part.active.size());
      active_idx.assign(order.begin() + nc, order.begin() + nc + dc);
      std::sort(active_idx.begin(), active_idx.end());
      double f_new = 0.0;
      for (int i = 0; i < d; ++i) {
        if (std::find(active_idx.begin(), active_idx.end(), i) ==
            active_idx.end()) {
          f_new += orbital_entropy(best.rdms, i);
        }
      }
      if (f_new <= best.f_star + cfg.eps1) {
        best.f_star = f_new;
        continue;
      }
      std::vector<char> is_n2(d, 1);
      for (int a : active_idx) is_n2[a] = 0;
      OrbitalRotation rot = OrbitalRotation::identity(d);
      rot.u = best.u_star;
      SpinTracedRDMs rdms = best.rdms;
      std::mt19937_64 rng(
          detail::mix_seed(cfg.seed, 2 * cfg.restarts + 1 + round));
      detail::SweepOutcome sweep = detail::jacobi_sweeps(rdms, rot, is_n2,
                                                         cfg, rng);
      best.f_star = sweep.f;
      best.u_star = rot.u;
      best.rdms = std::move(rdms);
      best.accepted_steps.insert(best.accepted_steps.end(),
                                 sweep.accepted.begin(), sweep.accepted.end());
      best.step_f.insert(best.step_f.end(), sweep.step_f.begin(),
                         sweep.step_f.end());
      best.history.insert(best.history.end(), sweep.history.begin(),
                          sweep.history.end());
      best.cycles += sweep.cycles;
    }
  }

  std::vector<double> occ(d);
  for (int i = 0; i < d; ++i) {
    occ[i] = best.rdms.gamma_a(i, i) + best.rdms.gamma_b(i, i);
  }
  auto by_desc_occ = [&](std::vector<int> v) {
    std::stable_sort(v.begin(), v.end(), [&](int x, int y) {
      return occ[x] > occ[y];
    });
    return v;
  };
  std::vector<int> new_order;
  for (int i : by_desc_occ(classified.closed)) new_order.push_back(i);
  for (int i : by_desc_occ(classified.active)) new_order.push_back(i);
  for (int i : by_desc_occ(classified.virt)) new_order.push_back(i);

  Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(d, d);
  for (int row = 0; row < d; ++row) perm(row, new_order[row]) = 1.0;
  best.u_star = perm * best.u_star;
  best.rdms = rotate_rdms(best.rdms, perm);

  CasPartition canonical;
  canonical.n_cas = part.n_cas;
  const int nc = static_cast<int>(classified.closed.size());
  const int na = static_cast<int>(classified.active.size());
  for (int i = 0; i < nc; ++i) canonical.closed.push_back(i);
  for (int i = nc; i < nc + na; ++i) canonical.active.push_back(i);
  for (int i = nc + na; i < d; ++i) canonical.virt.push_back(i);
  canonical.validate(d, n_elec);
  best.partition = canonical;
  return best;
}

struct TotalEntropyResult {
  double f_star = 0.0;
  Eigen::MatrixXd u_star;
  SpinTracedRDMs rdms;
  std::vector<JacobiStep> accepted_steps;
  std::vector<double> history;
  int cycles = 0;
};

// Same sweep with every orbital counted in the cost (all pairs admitted);
// used for threshold diagrams over a least-entangled basis.
inline TotalEntropyResult optimize_total_entropy(const SpinTracedRDMs& rdms_in,
                                                 const QicasConfig& cfg) {
  const int d = rdms_in.d;
  const std::vector<char> is_n(d, 1);
  TotalEntropyResult best;
  bool have_best = false;
  for (int r = 0; r < cfg.restarts; ++r) {
    SpinTracedRDMs rdms = rdms_in;
    OrbitalRotation rot = OrbitalRotation::identity(d);
    if (r > 0) {
      const Eigen::MatrixXd u0 =
          random_orthogonal(d, detail::mix_seed(cfg.seed, 2 * r + 1));
      rdms = rotate_rdms(rdms_in, u0);
      rot.u = u0;
    }
    std::mt19937_64 rng(detail::mix_seed(cfg.seed, 2 * r));
    detail::SweepOutcome sweep =
        detail::jacobi_sweeps(rdms, rot, is_n, cfg, rng);
    if (!have_best || sweep.f < best.f_star) {
      best.f_star = sweep.f;
      best.u_star = rot.u;
      best.rdms = std::move(rdms);
      best.accepted_steps = std::move(sweep.accepted);
      best.history = std::move(sweep.history);
      best.cycles = sweep.cycles;
      have_best = true;
    }
  }
  return best;
}

}  // namespace qicas
