// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qicas/qicas.hpp"

namespace {

// Command-line misuse that CLI11 cannot catch on its own (mutually dependent
// options, malformed compound values). Reported on stderr with exit code 2;
// library errors exit with 1.
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ",";
    out << v[i];
  }
  return out.str();
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::ostringstream out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ",";
      out << qicas::fmt17(m(r, c));
    }
    out << "\n";
  }
  return out.str();
}

// Model selection shared by every subcommand: integrals come from an
// FCIDUMP-format file or a generated Hubbard chain, optionally viewed
// through an orbital basis read from file.
struct ModelOptions {
  std::string fcidump;
  std::vector<double> hubbard;  // L,t,u
  bool periodic = false;
  int nelec = 0;
  int ms2 = 0;
  std::string basis_file;
  CLI::Option* nelec_opt = nullptr;
  CLI::Option* ms2_opt = nullptr;
};

void add_model_options(CLI::App* cmd, ModelOptions* m) {
  auto* fc = cmd->add_option("--fcidump", m->fcidump,
                             "integral file in FCIDUMP format");
  auto* hb = cmd->add_option("--hubbard", m->hubbard,
                             "Hubbard chain parameters L,t,u")
                 ->expected(3)
                 ->delimiter(',');
  fc->excludes(hb);
  hb->excludes(fc);
  cmd->add_flag("--periodic", m->periodic,
                "close the Hubbard chain into a ring (L >= 3)");
  m->nelec_opt =
      cmd->add_option("--nelec", m->nelec,
                      "electron count (default: file header, or L)");
  m->ms2_opt = cmd->add_option(
      "--ms2", m->ms2, "spin projection 2*Ms (default: header, or nelec%2)");
  cmd->add_option("--basis-file,--basis", m->basis_file,
                  "orbital coefficient file applied to the integrals first");
}

qicas::MolecularHamiltonian build_model(const ModelOptions& m) {
  qicas::MolecularHamiltonian h;
  if (!m.fcidump.empty()) {
    h = qicas::read_fcidump_file(m.fcidump);
    if (m.nelec_opt->count() > 0) h.set_n_electrons(m.nelec);
    if (m.ms2_opt->count() > 0) h.set_ms2(m.ms2);
  } else if (!m.hubbard.empty()) {
    const double l_raw = m.hubbard[0];
    const int l = static_cast<int>(std::lround(l_raw));
    if (l != l_raw) throw usage_error("--hubbard site count must be an integer");
    const int ne = m.nelec_opt->count() > 0 ? m.nelec : l;
    const int ms2 = m.ms2_opt->count() > 0 ? m.ms2 : ne % 2;
    h = qicas::build_hubbard(l, m.hubbard[1], m.hubbard[2], ne, ms2,
                             m.periodic);
  } else {
    throw usage_error("one of --fcidump or --hubbard is required");
  }
  return h;
}

Eigen::MatrixXd load_basis(const ModelOptions& m,
                           const qicas::MolecularHamiltonian& h) {
  if (m.basis_file.empty()) {
    return Eigen::MatrixXd::Identity(h.n_orbitals(), h.n_orbitals());
  }
  Eigen::MatrixXd u = qicas::read_orbitals_file(m.basis_file);
  if (u.rows() != h.n_orbitals()) {
    throw usage_error("--basis dimension does not match the orbital count");
  }
  return u;
}

void describe_model(const ModelOptions& m,
                    std::map<std::string, std::string>* kv) {
  if (!m.fcidump.empty()) {
    (*kv)["fcidump"] = m.fcidump;
  } else {
    (*kv)["hubbard_l"] = std::to_string(static_cast<int>(m.hubbard[0]));
    (*kv)["hubbard_t"] = qicas::fmt17(m.hubbard[1]);
    (*kv)["hubbard_u"] = qicas::fmt17(m.hubbard[2]);
    (*kv)["periodic"] = m.periodic ? "1" : "0";
  }
  if (!m.basis_file.empty()) (*kv)["basis"] = m.basis_file;
}

void add_solver_options(CLI::App* cmd, qicas::SolverOptions* s) {
  cmd->add_option("--tol", s->tol, "eigensolver residual tolerance");
  cmd->add_option("--max-iter", s->max_iter,
                  "eigensolver iteration cap before giving up");
  cmd->add_option("--max-space-dim", s->max_space_dim,
                  "refuse determinant spaces larger than this");
  cmd->add_option("--max-subspace", s->max_subspace,
                  "subspace size that triggers an eigensolver restart");
}

void describe_solver(const qicas::SolverOptions& s,
                     std::map<std::string, std::string>* kv) {
  (*kv)["tol"] = qicas::fmt17(s.tol);
  (*kv)["max_iter"] = std::to_string(s.max_iter);
  (*kv)["max_space_dim"] = std::to_string(s.max_space_dim);
  (*kv)["max_subspace"] = std::to_string(s.max_subspace);
}

// Active-space selection: --cas N,D picks electrons and orbital count,
// --active pins the active orbital indices (list length D).
struct CasOptions {
  std::vector<int> cas;  // n_cas, d_cas
  std::vector<int> active;
};

void add_cas_options(CLI::App* cmd, CasOptions* c, bool required = true) {
  auto* opt = cmd->add_option("--cas", c->cas,
                              "active space as N_electrons,D_orbitals")
                  ->expected(2)
                  ->delimiter(',');
  if (required) opt->required();
  cmd->add_option("--active", c->active,
                  "explicit active orbital indices (length D)")
      ->delimiter(',');
}

qicas::CasPartition make_partition(const CasOptions& c,
                                   const qicas::MolecularHamiltonian& h) {
  const int n_cas = c.cas[0], d_cas = c.cas[1];
  if (!c.active.empty()) {
    if (static_cast<int>(c.active.size()) != d_cas) {
      throw usage_error("--active length must equal the D in --cas");
    }
    return qicas::partition_with_active(h.n_orbitals(), h.n_electrons(),
                                        n_cas, c.active);
  }
  return qicas::contiguous_partition(h.n_orbitals(), h.n_electrons(), n_cas,
                                     d_cas);
}

void describe_cas(const CasOptions& c, std::map<std::string, std::string>* kv) {
  (*kv)["n_cas"] = std::to_string(c.cas[0]);
  (*kv)["d_cas"] = std::to_string(c.cas[1]);
  if (!c.active.empty()) (*kv)["active"] = join_ints(c.active);
}

void add_qicas_options(CLI::App* cmd, qicas::QicasConfig* q,
                       std::string* scope) {
  cmd->add_option("--restarts", q->restarts,
                  "optimizer restarts (first starts from the input basis)");
  cmd->add_option("--seed", q->seed, "seed for shuffles and restart bases");
  cmd->add_option("--cycles", q->n_cycle, "sweep cap");
  cmd->add_option("--eps1", q->eps1, "minimum per-step improvement");
  cmd->add_option("--eps2", q->eps2, "per-cycle improvement stop threshold");
  cmd->add_option("--coarse-step", q->coarse_step,
                  "coarse angle grid spacing over [0, pi)");
  cmd->add_option("--fine-step", q->fine_step,
                  "refinement grid spacing around the coarse winner");
  cmd->add_option("--scope", *scope,
                  "pair admission rule: either | exclusive")
      ->check(CLI::IsMember({"either", "exclusive"}));
}

qicas::QicasConfig resolve_qicas(qicas::QicasConfig q,
                                 const std::string& scope) {
  q.scope = scope == "exclusive" ? qicas::PairScope::exclusive
                                 : qicas::PairScope::either;
  return q;
}

void describe_qicas(const qicas::QicasConfig& q, const std::string& scope,
                    std::map<std::string, std::string>* kv) {
  (*kv)["restarts"] = std::to_string(q.restarts);
  (*kv)["seed"] = std::to_string(q.seed);
  (*kv)["cycles_cap"] = std::to_string(q.n_cycle);
  (*kv)["eps1"] = qicas::fmt17(q.eps1);
  (*kv)["eps2"] = qicas::fmt17(q.eps2);
  (*kv)["coarse_step"] = qicas::fmt17(q.coarse_step);
  (*kv)["fine_step"] = qicas::fmt17(q.fine_step);
  (*kv)["scope"] = scope;
}

// Every subcommand with --out drops a manifest.txt of its resolved settings
// next to the data files, so a result directory is reproducible on its own.
struct OutputSink {
  std::filesystem::path dir;
  bool enabled = false;

  void write(const std::string& name, const std::string& text) const {
    if (enabled) qicas::write_text_file(dir / name, text);
  }
};

OutputSink make_sink(const std::string& out,
                     const std::string& command,
                     std::map<std::string, std::string> settings) {
  OutputSink sink;
  if (out.empty()) return sink;
  sink.dir = out;
  sink.enabled = true;
  std::filesystem::create_directories(sink.dir);
  settings["command"] = command;
  sink.write("manifest.txt", qicas::key_value_block(settings));
  return sink;
}

// --------------------------------------------------------------------------
// Subcommand registration. Each handler owns its option state in a shared_ptr
// captured by the CLI11 callback.

struct CommonState {
  ModelOptions model;
  qicas::SolverOptions solver;
  std::string out;
  int precision = 9;
};

void add_common(CLI::App* cmd, CommonState* st, bool with_solver = true) {
  add_model_options(cmd, &st->model);
  if (with_solver) add_solver_options(cmd, &st->solver);
  cmd->add_option("--out", st->out, "directory for result files");
  cmd->add_option("--precision", st->precision,
                  "significant digits in console output")
      ->check(CLI::Range(1, 17));
  cmd->set_config("--config", "",
                  "read option defaults from a key=value file");
}

std::map<std::string, std::string> common_settings(const CommonState& st) {
  std::map<std::string, std::string> kv;
  describe_model(st.model, &kv);
  describe_solver(st.solver, &kv);
  kv["precision"] = std::to_string(st.precision);
  return kv;
}

void register_solve(CLI::App& app) {
  auto st = std::make_shared<CommonState>();
  CLI::App* cmd = app.add_subcommand("solve", "exact ground-state energy");
  add_common(cmd, st.get());
  cmd->callback([st] {
    const qicas::MolecularHamiltonian h = build_model(st->model);
    const Eigen::MatrixXd u0 = load_basis(st->model, h);
    const qicas::MolecularHamiltonian ht =
        st->model.basis_file.empty() ? h : qicas::transform_integrals(h, u0);
    const qicas::GroundState gs = qicas::ground_state(ht, st->solver);
    std::cout << "e_fci = " << num(gs.energy, st->precision) << "\n"
              << "determinants = " << gs.psi.space.size() << "\n";
    const OutputSink sink = make_sink(st->out, "solve", common_settings(*st));
    std::map<std::string, std::string> kv;
    kv["e_fci"] = qicas::fmt17(gs.energy);
    kv["determinants"] = std::to_string(gs.psi.space.size());
    sink.write("summary.txt", qicas::key_value_block(kv));
  });
}

void register_rdm(CLI::App& app) {
  auto st = std::make_shared<CommonState>();
  CLI::App* cmd = app.add_subcommand(
      "rdm", "spin-traced reduced density matrices of the ground state");
  add_common(cmd, st.get());
  cmd->callback([st] {
    const qicas::MolecularHamiltonian h = build_model(st->model);
    const Eigen::MatrixXd u0 = load_basis(st->model, h);
    const qicas::MolecularHamiltonian ht =
        st->model.basis_file.empty() ? h : qicas::transform_integrals(h, u0);
    const qicas::GroundState gs = qicas::ground_state(ht, st->solver);
    const qicas::SpinTracedRDMs rdms = qicas::compute_rdms(gs.psi);
    for (int i = 0; i < rdms.d; ++i) {
      const double occ = rdms.gamma_a(i, i) + rdms.gamma_b(i, i);
      std::cout << "occupancy[" << i << "] = " << num(occ, st->precision)
                << "\n";
    }
    std::cout << "trace_alpha = "
              << num(rdms.gamma_a.trace(), st->precision) << "\n"
              << "trace_beta = " << num(rdms.gamma_b.trace(), st->precision)
              << "\n";
    const OutputSink sink = make_sink(st->out, "rdm", common_settings(*st));
    sink.write("gamma_alpha.csv", matrix_csv(rdms.gamma_a));
    sink.write("gamma_beta.csv", matrix_csv(rdms.gamma_b));
  });
}

void register_entropy(CLI::App& app) {
  auto st = std::make_shared<CommonState>();
  CLI::App* cmd = app.add_subcommand(
      "entropy", "orbital entropy profile and mutual information");
  add_common(cmd, st.get());
  cmd->callback([st] {
    const qicas::MolecularHamiltonian h = build_model(st->model);
    const Eigen::MatrixXd u0 = load_basis(st->model, h);
    const qicas::MolecularHamiltonian ht =
        st->model.basis_file.empty() ? h : qicas::transform_integrals(h, u0);
    const qicas::GroundState gs = qicas::ground_state(ht, st->solver);
    const qicas::SpinTracedRDMs rdms = qicas::compute_rdms(gs.psi);
    const qicas::EntropyProfile prof = qicas::entropy_profile(rdms);
    for (std::size_t i = 0; i < prof.entropies.size(); ++i) {
      std::cout << "s[" << i << "] = "
                << num(prof.entropies[i], st->precision) << "\n";
    }
    std::cout << "total = " << num(prof.total, st->precision) << "\n";
    const OutputSink sink =
        make_sink(st->out, "entropy", common_settings(*st));
    sink.write("profile.csv", qicas::entropy_profile_csv(prof));
    if (sink.enabled) {
      const Eigen::MatrixXd mi = qicas::mutual_information_matrix(gs.psi);
      sink.write("mutual_information.csv", qicas::mutual_information_csv(mi));
      sink.write("threshold.csv",
                 qicas::threshold_csv(qicas::threshold_diagram(prof.entropies)));
    }
  });
}

struct QicasState : CommonState {
  CasOptions cas;
  qicas::QicasConfig cfg;
  std::string scope = "either";
};

void register_qicas(CLI::App& app) {
  auto st = std::make_shared<QicasState>();
  CLI::App* cmd = app.add_subcommand(
      "qicas", "minimize the summed non-active orbital entropy");
  add_common(cmd, st.get());
  add_cas_options(cmd, &st->cas);
  add_qicas_options(cmd, &st->cfg, &st->scope);
  cmd->callback([st] {
    const qicas::MolecularHamiltonian h = build_model(st->model);
    const Eigen::MatrixXd u0 = load_basis(st->model, h);
    const qicas::MolecularHamiltonian ht =
        st->model.basis_file.empty() ? h : qicas::transform_integrals(h, u0);
    const qicas::GroundState gs = qicas::ground_state(ht, st->solver);
    const qicas::SpinTracedRDMs rdms = qicas::compute_rdms(gs.psi);
    const qicas::CasPartition part = make_partition(st->cas, h);
    const qicas::QicasConfig cfg = resolve_qicas(st->cfg, st->scope);
    const qicas::QicasResult res = qicas::optimize(rdms, part, cfg);
    const Eigen::MatrixXd u_total = res.u_star * u0;
    const qicas::CasciResult cas =
        qicas::casci_energy(h, u_total, res.partition, st->solver);

    std::cout << "f_star = " << num(res.f_star, st->precision) << "\n"
              << "cycles = " << res.cycles << "\n"
              << "accepted_steps = " << res.accepted_steps.size() << "\n"
              << "winning_restart = " << res.winning_restart << "\n"
              << "closed = " << join_ints(res.partition.closed) << "\n"
              << "active = " << join_ints(res.partition.active) << "\n"
              << "virtual = " << join_ints(res.partition.virt) << "\n"
              << "e_fci = " << num(gs.energy, st->precision) << "\n"
              << "e_casci = " << num(cas.e_total, st->precision) << "\n";

    auto settings = common_settings(*st);
    describe_cas(st->cas, &settings);
    describe_qicas(cfg, st->scope, &settings);
    const OutputSink sink = make_sink(st->out, "qicas", settings);
    sink.write("history.csv", qicas::history_csv(res.history));
    sink.write("orbitals.txt", qicas::write_orbitals(u_total));
    sink.write("profile_final.csv",
               qicas::entropy_profile_csv(qicas::entropy_profile(res.rdms)));
    std::map<std::string, std::string> kv;
    kv["f_star"] = qicas::fmt17(res.f_star);
    kv["cycles"] = std::to_string(res.cycles);
    kv["accepted_steps"] = std::to_string(res.accepted_steps.size());
    kv["winning_restart"] = std::to_string(res.winning_restart);
    kv["closed"] = join_ints(res.partition.closed);
    kv["active"] = join_ints(res.partition.active);
    kv["virtual"] = join_ints(res.partition.virt);
    kv["e_fci"] = qicas::fmt17(gs.energy);
    kv["e_casci"] = qicas::fmt17(cas.e_total);
    kv["e_core_eff"] = qicas::fmt17(cas.e_core_eff);
    sink.write("summary.txt", qicas::key_value_block(kv));
  });
}

struct CasciState : CommonState {
  CasOptions cas;
};

void register_casci(CLI::App& app) {
  auto st = std::make_shared<CasciState>();
  CLI::App* cmd = app.add_subcommand(
      "casci", "active-space energy with folded closed shells");
  add_common(cmd, st.get());
  add_cas_options(cmd, &st->cas);
  cmd->callback([st] {
    const qicas::MolecularHamiltonian h = build_model(st->model);
    const Eigen::MatrixXd u0 = load_basis(st->model, h);
    const qicas::CasPartition part = make_partition(st->cas, h);
    const qicas::CasciResult cas =
        st->model.basis_file.empty()
            ? qicas::casci_energy(h, part, st->solver)
            : qicas::casci_energy(h, u0, part, st->solver);
    std::cout << "e_casci = " << num(cas.e_total, st->precision) << "\n"
              << "e_core_eff = " << num(cas.e_core_eff, st->precision)
              << "\n";
    auto settings = common_settings(*st);
    describe_cas(st->cas, &settings);
    const OutputSink sink = make_sink(st->out, "casci", settings);
    std::map<std::string, std::string> kv;
    kv["e_casci"] = qicas::fmt17(cas.e_total);
    kv["e_core_eff"] = qicas::fmt17(cas.e_core_eff);
    sink.write("summary.txt", qicas::key_value_block(kv));
  });
}

struct ScanState : CommonState {
  CasOptions cas;
  int samples = 100;
  double scale = 0.2;
  std::uint64_t seed = 0;
  int jobs = 1;
};

void register_scan(CLI::App& app) {
  auto st = std::make_shared<ScanState>();
  CLI::App* cmd = app.add_subcommand(
      "scan", "correlate cost against energy over perturbed bases");
  add_common(cmd, st.get());
  add_cas_options(cmd, &st->cas);
  cmd->add_option("--samples", st->samples, "number of perturbed bases")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--scale", st->scale, "perturbation generator scale");
  cmd->add_option("--seed", st->seed, "seed for the perturbation stream");
  cmd->add_option("--jobs", st->jobs, "worker threads")
      ->check(CLI::PositiveNumber);
  cmd->callback([st] {
    const qicas::MolecularHamiltonian h = build_model(st->model);
    const Eigen::MatrixXd u0 = load_basis(st->model, h);
    const qicas::CasPartition part = make_partition(st->cas, h);
    const std::vector<qicas::ScanSample> samples = qicas::scan_random_bases(
        h, part, u0, st->samples, st->scale, st->seed, st->solver, st->jobs);
    std::vector<double> f(samples.size()), e(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      f[i] = samples[i].f_qi;
      e[i] = samples[i].e_casci;
    }
    const double r = qicas::pearson(f, e);
    std::cout << "samples = " << samples.size() << "\n"
              << "pearson = " << num(r, st->precision) << "\n"
              << "f_qi_min = " << num(f.front(), st->precision) << "\n"
              << "e_casci_at_min = " << num(e.front(), st->precision) << "\n";
    auto settings = common_settings(*st);
    describe_cas(st->cas, &settings);
    settings["samples"] = std::to_string(st->samples);
    settings["scale"] = qicas::fmt17(st->scale);
    settings["seed"] = std::to_string(st->seed);
    const OutputSink sink = make_sink(st->out, "scan", settings);
    sink.write("scan.csv", qicas::scan_csv(samples));
    std::map<std::string, std::string> kv;
    kv["pearson"] = qicas::fmt17(r);
    kv["samples"] = std::to_string(st->samples);
    sink.write("summary.txt", qicas::key_value_block(kv));
  });
}

struct BoundState : CommonState {
  CasOptions cas;
};

void register_bound(CLI::App& app) {
  auto st = std::make_shared<BoundState>();
  CLI::App* cmd = app.add_subcommand(
      "bound", "check the entropy-based energy-error bound chain");
  add_common(cmd, st.get());
  add_cas_options(cmd, &st->cas);
  cmd->callback([st] {
    const qicas::MolecularHamiltonian h = build_model(st->model);
    const Eigen::MatrixXd u0 = load_basis(st->model, h);
    const qicas::CasPartition part = make_partition(st->cas, h);
    const qicas::BoundReport r = qicas::verify_bound(h, u0, part, st->solver);
    const int p = st->precision;
    std::cout << "e_fci = " << num(r.e_fci, p) << "\n"
              << "e_casci = " << num(r.e_casci, p) << "\n"
              << "delta_e = " << num(r.delta_e, p) << "\n"
              << "delta_e_prime = " << num(r.delta_e_prime, p) << "\n"
              << "delta_e_max = " << num(r.delta_e_max, p) << "\n"
              << "epsilon = " << num(r.epsilon, p) << "\n"
              << "f_qi = " << num(r.f_qi, p) << "\n"
              << "bound_rhs = " << num(r.bound_rhs, p) << "\n"
              << "holds_a = " << r.holds_a << "\n"
              << "holds_b = " << r.holds_b << "\n"
              << "holds_c = " << r.holds_c << "\n"
              << "holds_d = " << r.holds_d << "\n"
              << "chain_holds = " << r.chain_holds << "\n";
    auto settings = common_settings(*st);
    describe_cas(st->cas, &settings);
    const OutputSink sink = make_sink(st->out, "bound", settings);
    sink.write("bound.csv", qicas::bound_csv(r));
  });
}

struct SizeState : CommonState {
  qicas::QicasConfig cfg;
  std::string scope = "either";
  int min_run = 5;
};

void register_size(CLI::App& app) {
  auto st = std::make_shared<SizeState>();
  CLI::App* cmd = app.add_subcommand(
      "size", "suggest an active-space size from the threshold diagram");
  add_common(cmd, st.get());
  add_qicas_options(cmd, &st->cfg, &st->scope);
  cmd->add_option("--min-run", st->min_run,
                  "plateau length required for a suggestion");
  cmd->callback([st] {
    const qicas::MolecularHamiltonian h = build_model(st->model);
    const Eigen::MatrixXd u0 = load_basis(st->model, h);
    const qicas::MolecularHamiltonian ht =
        st->model.basis_file.empty() ? h : qicas::transform_integrals(h, u0);
    const qicas::GroundState gs = qicas::ground_state(ht, st->solver);
    const qicas::SpinTracedRDMs rdms = qicas::compute_rdms(gs.psi);
    const qicas::QicasConfig cfg = resolve_qicas(st->cfg, st->scope);
    const qicas::TotalEntropyResult total =
        qicas::optimize_total_entropy(rdms, cfg);
    const qicas::EntropyProfile prof = qicas::entropy_profile(total.rdms);
    const qicas::ThresholdDiagram diagram =
        qicas::threshold_diagram(prof.entropies);
    const int d_cas =
        qicas::suggest_cas_size(diagram, h.n_orbitals(), st->min_run);
    std::cout << "suggested_d_cas = " << d_cas << "\n"
              << "f_total = " << num(total.f_star, st->precision) << "\n"
              << "cycles = " << total.cycles << "\n";
    auto settings = common_settings(*st);
    describe_qicas(cfg, st->scope, &settings);
    settings["min_run"] = std::to_string(st->min_run);
    const OutputSink sink = make_sink(st->out, "size", settings);
    sink.write("threshold.csv", qicas::threshold_csv(diagram));
    sink.write("history.csv", qicas::history_csv(total.history));
    sink.write("profile_total.csv", qicas::entropy_profile_csv(prof));
    std::map<std::string, std::string> kv;
    kv["suggested_d_cas"] = std::to_string(d_cas);
    kv["f_total"] = qicas::fmt17(total.f_star);
    kv["cycles"] = std::to_string(total.cycles);
    sink.write("summary.txt", qicas::key_value_block(kv));
  });
}

struct PipelineState : CommonState {
  qicas::QicasConfig cfg;
  std::string scope = "either";
  int n_cas = -1;
  int d_cas = -1;
  int min_run = 5;
  bool no_bound = false;
};

void register_pipeline(CLI::App& app) {
  auto st = std::make_shared<PipelineState>();
  CLI::App* cmd = app.add_subcommand(
      "pipeline", "solve, size, optimize, and check in one run");
  add_common(cmd, st.get());
  add_qicas_options(cmd, &st->cfg, &st->scope);
  cmd->add_option("--n-cas", st->n_cas,
                  "active electron count (default: derived)");
  cmd->add_option("--d-cas", st->d_cas,
                  "active orbital count (default: threshold plateau)");
  cmd->add_option("--min-run", st->min_run,
                  "plateau length required for automatic sizing");
  cmd->add_flag("--no-bound", st->no_bound, "skip the bound check stage");
  cmd->get_option("--out")->required();
  cmd->callback([st] {
    const qicas::MolecularHamiltonian h = build_model(st->model);
    const Eigen::MatrixXd u0 = load_basis(st->model, h);
    const qicas::MolecularHamiltonian ht =
        st->model.basis_file.empty() ? h : qicas::transform_integrals(h, u0);
    qicas::PipelineOptions popts;
    popts.n_cas = st->n_cas;
    popts.d_cas = st->d_cas;
    popts.qicas = resolve_qicas(st->cfg, st->scope);
    popts.solver = st->solver;
    popts.min_run = st->min_run;
    popts.run_bound = !st->no_bound;
    const qicas::PipelineReport rep = qicas::run_pipeline(ht, popts, st->out);
    const int p = st->precision;
    std::cout << "e_fci = " << num(rep.e_fci, p) << "\n"
              << "d_cas = " << rep.d_cas << "\n"
              << "n_cas = " << rep.n_cas << "\n"
              << "f_star = " << num(rep.qicas.f_star, p) << "\n"
              << "e_casci_input = " << num(rep.e_casci_input, p) << "\n"
              << "e_casci_opt = " << num(rep.casci_opt.e_total, p) << "\n"
              << "delta_e_opt = "
              << num(rep.casci_opt.e_total - rep.e_fci, p) << "\n";
    if (rep.bound) {
      std::cout << "chain_holds = " << rep.bound->chain_holds << "\n";
    }
    auto settings = common_settings(*st);
    describe_qicas(popts.qicas, st->scope, &settings);
    settings["n_cas_requested"] = std::to_string(st->n_cas);
    settings["d_cas_requested"] = std::to_string(st->d_cas);
    settings["min_run"] = std::to_string(st->min_run);
    settings["run_bound"] = popts.run_bound ? "1" : "0";
    make_sink(st->out, "pipeline", settings);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum-information-assisted active-space toolkit"};
  app.set_version_flag("--version", "qicas 0.1.0");
  app.require_subcommand(1);
  register_solve(app);
  register_rdm(app);
  register_entropy(app);
  register_qicas(app);
  register_casci(app);
  register_scan(app);
  register_bound(app);
  register_size(app);
  register_pipeline(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qicas::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
