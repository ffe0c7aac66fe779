// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "qicas/analysis.hpp"
#include "qicas/casci.hpp"
#include "qicas/correlation.hpp"
#include "qicas/errors.hpp"
#include "qicas/fci.hpp"
#include "qicas/fcidump.hpp"
#include "qicas/io.hpp"
#include "qicas/optimizer.hpp"

namespace qicas {

struct PipelineOptions {
  int n_cas = -1;        // -1: derive from d_cas (parity-matched to n_elec)
  int d_cas = -1;        // -1: choose via the threshold-diagram plateau
  QicasConfig qicas;
  SolverOptions solver;
  int min_run = 5;       // plateau length for automatic sizing
  bool run_bound = true;
};

struct PipelineReport {
  double e_fci = 0.0;
  int n_cas = 0;
  int d_cas = 0;
  int suggested_d_cas = -1;  // -1 when automatic sizing did not run
  EntropyProfile profile_initial;
  EntropyProfile profile_final;
  std::optional<ThresholdDiagram> diagram;
  QicasResult qicas;
  CasciResult casci_opt;
  double e_casci_input = 0.0;
  std::optional<BoundReport> bound;
};

namespace detail {

// Largest n_cas <= min(d_cas, n_elec) with the parity of n_elec that still
// leaves room for the implied closed shells.
inline int default_n_cas(int d, int n_elec, int d_cas) {
  int n = std::min(d_cas, n_elec);
  if ((n_elec - n) % 2 != 0) --n;
  while (n >= 0) {
    const int closed = (n_elec - n) / 2;
    if (closed + d_cas <= d && n <= 2 * d_cas) return n;
    n -= 2;
  }
  throw domain_error("no feasible n_cas for the requested active size");
}

template <typename Fn>
auto pipeline_stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const error& e) {
    throw error(std::string("stage ") + name + ": " + e.what());
  }
}

}  // namespace detail

// End-to-end run: exact solve, entropy profile, optional plateau-based
// active-space sizing, cost minimization, CASCI at the optimized basis, and
// the energy-error bound check. Artifacts land in `out_dir`:
//   profile_initial.csv, profile_final.csv, history.csv, orbitals.txt,
//   threshold.csv (automatic sizing only), bound.csv, summary.txt.
inline PipelineReport run_pipeline(const MolecularHamiltonian& h,
                                   const PipelineOptions& opts,
                                   const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  PipelineReport rep;

  const GroundState gs = detail::pipeline_stage("solve", [&] {
    return ground_state(h, opts.solver);
  });
  rep.e_fci = gs.energy;

  const SpinTracedRDMs rdms0 = detail::pipeline_stage("rdm", [&] {
    return compute_rdms(gs.psi);
  });
  rep.profile_initial = detail::pipeline_stage("profile", [&] {
    return entropy_profile(rdms0);
  });

  int d_cas = opts.d_cas;
  if (d_cas < 0) {
    detail::pipeline_stage("size", [&] {
      const TotalEntropyResult total =
          optimize_total_entropy(rdms0, opts.qicas);
      const EntropyProfile prof = entropy_profile(total.rdms);
      rep.diagram = threshold_diagram(prof.entropies);
      rep.suggested_d_cas =
          suggest_cas_size(*rep.diagram, h.n_orbitals(), opts.min_run);
      return 0;
    });
    d_cas = rep.suggested_d_cas;
  }
  const int n_cas =
      opts.n_cas >= 0
          ? opts.n_cas
          : detail::default_n_cas(h.n_orbitals(), h.n_electrons(), d_cas);
  rep.n_cas = n_cas;
  rep.d_cas = d_cas;

  const CasPartition part = detail::pipeline_stage("partition", [&] {
    return contiguous_partition(h.n_orbitals(), h.n_electrons(), n_cas, d_cas);
  });

  rep.e_casci_input = detail::pipeline_stage("casci-input", [&] {
    return casci_energy(h, part, opts.solver).e_total;
  });

  rep.qicas = detail::pipeline_stage("optimize", [&] {
    return optimize(rdms0, part, opts.qicas);
  });
  rep.profile_final = detail::pipeline_stage("profile-final", [&] {
    return entropy_profile(rep.qicas.rdms);
  });

  rep.casci_opt = detail::pipeline_stage("casci", [&] {
    return casci_energy(h, rep.qicas.u_star, rep.qicas.partition, opts.solver);
  });

  if (opts.run_bound) {
    rep.bound = detail::pipeline_stage("bound", [&] {
      return verify_bound(h, rep.qicas.u_star, rep.qicas.partition,
                          opts.solver);
    });
  }

  detail::pipeline_stage("write", [&] {
    write_text_file(out_dir / "profile_initial.csv",
                    entropy_profile_csv(rep.profile_initial));
    write_text_file(out_dir / "profile_final.csv",
                    entropy_profile_csv(rep.profile_final));
    write_text_file(out_dir / "history.csv", history_csv(rep.qicas.history));
    write_text_file(out_dir / "orbitals.txt", write_orbitals(rep.qicas.u_star));
    if (rep.diagram) {
      write_text_file(out_dir / "threshold.csv", threshold_csv(*rep.diagram));
    }
    if (rep.bound) {
      write_text_file(out_dir / "bound.csv", bound_csv(*rep.bound));
    }
    std::map<std::string, std::string> kv;
    kv["e_fci"] = fmt17(rep.e_fci);
    kv["n_cas"] = std::to_string(rep.n_cas);
    kv["d_cas"] = std::to_string(rep.d_cas);
    kv["suggested_d_cas"] = std::to_string(rep.suggested_d_cas);
    kv["f_star"] = fmt17(rep.qicas.f_star);
    kv["cycles"] = std::to_string(rep.qicas.cycles);
    kv["accepted_steps"] = std::to_string(rep.qicas.accepted_steps.size());
    kv["winning_restart"] = std::to_string(rep.qicas.winning_restart);
    kv["e_casci_input"] = fmt17(rep.e_casci_input);
    kv["e_casci_opt"] = fmt17(rep.casci_opt.e_total);
    kv["e_core_eff"] = fmt17(rep.casci_opt.e_core_eff);
    kv["delta_e_opt"] = fmt17(rep.casci_opt.e_total - rep.e_fci);
    if (rep.bound) {
      kv["epsilon"] = fmt17(rep.bound->epsilon);
      kv["delta_e_max"] = fmt17(rep.bound->delta_e_max);
      kv["bound_rhs"] = fmt17(rep.bound->bound_rhs);
      kv["chain_holds"] = rep.bound->chain_holds ? "1" : "0";
    }
    write_text_file(out_dir / "summary.txt", key_value_block(kv));
    return 0;
  });

  return rep;
}

}  // namespace qicas
