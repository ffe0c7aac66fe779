// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance harness: one criterion per number, run as `qicas_acceptance N`
// (or `all`). Each criterion prints a single [PASS]/[FAIL] line with its
// elapsed time; the process exits nonzero if any selected criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "frozen.hpp"
#include "oracle.hpp"
#include "qicas/qicas.hpp"

namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

oracle::SectorBasis mirror_basis(const qicas::DeterminantSpace& s) {
  std::vector<std::uint64_t> masks;
  masks.reserve(static_cast<std::size_t>(s.size()));
  for (std::int64_t k = 0; k < s.size(); ++k) {
    masks.push_back(s.alpha_of(k) | (s.beta_of(k) << s.d));
  }
  return oracle::with_masks(s.d, s.n_alpha, s.n_beta, masks);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// ---- criterion 1: RDM oracle equivalence --------------------------------

Outcome criterion1() {
  const qicas::MolecularHamiltonian h = qicas::build_hubbard(4, 1.0, 4.0, 4);
  const qicas::GroundState gs = qicas::ground_state(h);
  const qicas::SpinTracedRDMs r = qicas::compute_rdms(gs.psi);

  const oracle::SectorBasis b = mirror_basis(gs.psi.space);
  const Eigen::MatrixXd ga = oracle::one_rdm(b, gs.psi.coeffs, 0);
  const Eigen::MatrixXd gb = oracle::one_rdm(b, gs.psi.coeffs, 1);
  const std::vector<double> gos = oracle::os_2rdm(b, gs.psi.coeffs);

  double diff = (r.gamma_a - ga).cwiseAbs().maxCoeff();
  diff = std::max(diff, (r.gamma_b - gb).cwiseAbs().maxCoeff());
  for (std::size_t k = 0; k < gos.size(); ++k) {
    diff = std::max(diff, std::abs(r.gamma_os[k] - gos[k]));
  }
  return {diff < 1e-10, "max |library - oracle| = " + fmt(diff)};
}

// ---- criterion 2: basis-consistency master check -------------------------

Outcome criterion2() {
  const qicas::MolecularHamiltonian h = qicas::build_hubbard(6, 1.0, 4.0, 6);
  const qicas::GroundState gs = qicas::ground_state(h);
  const qicas::SpinTracedRDMs r = qicas::compute_rdms(gs.psi);
  const qicas::CasPartition part = qicas::contiguous_partition(6, 6, 4, 4);

  double worst_f = 0.0, worst_e = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Eigen::MatrixXd u =
        qicas::random_orthogonal(6, qicas::detail::mix_seed(777, k));
    const qicas::SpinTracedRDMs rotated = qicas::rotate_rdms(r, u);

    const qicas::MolecularHamiltonian ht = qicas::transform_integrals(h, u);
    const qicas::GroundState gt = qicas::ground_state(ht);
    const qicas::SpinTracedRDMs resolved = qicas::compute_rdms(gt.psi);

    worst_e = std::max(worst_e, std::abs(gt.energy - gs.energy));
    worst_f = std::max(
        worst_f, std::abs(qicas::f_qi(rotated, part) -
                          qicas::f_qi(resolved, part)));
    worst_f = std::max(
        worst_f,
        std::abs(qicas::f_qi_all(rotated) - qicas::f_qi_all(resolved)));
  }
  const bool ok = worst_f < 1e-8 && worst_e < 1e-9;
  return {ok, "20 bases, max |dF| = " + fmt(worst_f) +
                  ", max |dE| = " + fmt(worst_e)};
}

// ---- criterion 3: energy-error bound chain -------------------------------

Outcome criterion3() {
  int checked = 0, eligible = 0, violations = 0;
  int system_idx = 0;
  for (int sites : {4, 6}) {
    const qicas::MolecularHamiltonian h =
        qicas::build_hubbard(sites, 1.0, 4.0, sites);
    int part_idx = 0;
    for (int cas : {2, 4}) {
      const qicas::CasPartition part =
          qicas::contiguous_partition(sites, sites, cas, cas);
      const std::uint64_t base_seed =
          1234 + 10 * static_cast<std::uint64_t>(system_idx) +
          static_cast<std::uint64_t>(part_idx);
      for (int k = 0; k < 200; ++k) {
        const Eigen::MatrixXd u = qicas::random_orthogonal(
            sites, qicas::detail::mix_seed(base_seed, k));
        const qicas::BoundReport rep = qicas::verify_bound(h, u, part);
        ++checked;
        if (rep.epsilon_lt_half) {
          ++eligible;
          if (!rep.chain_holds) ++violations;
        }
      }
      ++part_idx;
    }
    ++system_idx;
  }
  std::ostringstream d;
  d << violations << " violations in " << eligible
    << " eligible samples (of " << checked << ")";
  return {violations == 0 && eligible > 0, d.str()};
}

// ---- criterion 4: cost/energy correlation around the optimum -------------

Outcome criterion4() {
  const qicas::MolecularHamiltonian h = qicas::build_hubbard(6, 1.0, 4.0, 6);
  const qicas::SpinTracedRDMs r =
      qicas::compute_rdms(qicas::ground_state(h).psi);
  const qicas::CasPartition part = qicas::contiguous_partition(6, 6, 4, 4);
  const qicas::QicasResult res = qicas::optimize(r, part, {});

  const auto samples = qicas::scan_random_bases(h, res.partition, res.u_star,
                                                200, 0.2, 4242);
  std::vector<double> fs, es;
  for (const auto& s : samples) {
    fs.push_back(s.f_qi);
    es.push_back(s.e_casci);
  }
  const double corr = qicas::pearson(fs, es);

  std::vector<double> sorted_e = es;
  std::sort(sorted_e.begin(), sorted_e.end());
  const double decile = sorted_e[19];  // 20th smallest of 200
  const bool min_f_low_e = samples.front().e_casci <= decile;

  const bool ok = corr > 0.5 && min_f_low_e;
  return {ok, "pearson = " + fmt(corr) +
                  ", min-F sample E in lowest decile: " +
                  (min_f_low_e ? "yes" : "no")};
}

// ---- criterion 5: dimer exhaustive optimality ----------------------------

Outcome criterion5() {
  const qicas::MolecularHamiltonian h = qicas::build_hubbard(2, 1.0, 4.0, 2);
  const qicas::SpinTracedRDMs r =
      qicas::compute_rdms(qicas::ground_state(h).psi);
  const qicas::CasPartition part = qicas::contiguous_partition(2, 2, 2, 1);

  const qicas::QicasResult res = qicas::optimize(r, part, {});
  const double e_opt =
      qicas::casci_energy(h, res.u_star, res.partition).e_total;

  // Brute-force reference over the single angle: 1e-3 sweep, then two
  // local refinements so the grid error sits far below the tolerances.
  auto cost = [&](double theta) {
    return qicas::f_qi(
        qicas::rotate_rdms(r, qicas::jacobi_matrix(2, 0, 1, theta)), part);
  };
  const double pi = std::acos(-1.0);
  double best_t = 0.0, best_f = cost(0.0);
  auto sweep = [&](double lo, double hi, double step) {
    for (double t = lo; t <= hi; t += step) {
      const double f = cost(t);
      if (f < best_f) {
        best_f = f;
        best_t = t;
      }
    }
  };
  sweep(0.0, pi, 1e-3);
  sweep(best_t - 1e-3, best_t + 1e-3, 1e-5);
  sweep(best_t - 1e-5, best_t + 1e-5, 1e-7);

  // Electron bookkeeping at the grid optimum: the active slot must be the
  // one able to host both electrons.
  const qicas::SpinTracedRDMs rot =
      qicas::rotate_rdms(r, qicas::jacobi_matrix(2, 0, 1, best_t));
  const double occ0 = rot.gamma_a(0, 0) + rot.gamma_b(0, 0);
  const double occ1 = rot.gamma_a(1, 1) + rot.gamma_b(1, 1);
  const qicas::CasPartition grid_part =
      qicas::partition_with_active(2, 2, 2, {occ0 >= occ1 ? 0 : 1});
  const double e_grid =
      qicas::casci_energy(h, qicas::jacobi_matrix(2, 0, 1, best_t), grid_part)
          .e_total;

  const double df = std::abs(res.f_star - best_f);
  const double de = std::abs(e_opt - e_grid);
  return {df < 1e-6 && de < 1e-8,
          "|dF| = " + fmt(df) + ", |dE| = " + fmt(de)};
}

// ---- criterion 6: dominance over site basis and random bases -------------

Outcome criterion6() {
  const qicas::MolecularHamiltonian h = qicas::build_hubbard(6, 1.0, 4.0, 6);
  const qicas::SpinTracedRDMs r =
      qicas::compute_rdms(qicas::ground_state(h).psi);
  const qicas::CasPartition part = qicas::contiguous_partition(6, 6, 4, 4);

  qicas::QicasConfig cfg;
  cfg.restarts = 10;
  const qicas::QicasResult res = qicas::optimize(r, part, cfg);
  const double e_opt =
      qicas::casci_energy(h, res.u_star, res.partition).e_total;

  const double e_site = qicas::casci_energy(h, part).e_total;
  double e_rand = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 500; ++k) {
    const Eigen::MatrixXd u =
        qicas::random_orthogonal(6, qicas::detail::mix_seed(99, k));
    e_rand = std::min(e_rand, qicas::casci_energy(h, u, part).e_total);
  }
  const bool ok = e_opt <= e_site - 1e-6 && e_opt <= e_rand;
  return {ok, "E* = " + fmt(e_opt) + ", site = " + fmt(e_site) +
                  ", best random = " + fmt(e_rand)};
}

// ---- criterion 7: noninteracting exactness -------------------------------

Outcome criterion7() {
  double worst_f = 0.0, worst_e = 0.0;
  for (int sites : {4, 6}) {
    const qicas::MolecularHamiltonian h =
        qicas::build_hubbard(sites, 1.0, 0.0, sites);
    const qicas::GroundState gs = qicas::ground_state(h);
    const qicas::SpinTracedRDMs r = qicas::compute_rdms(gs.psi);
    for (auto [n_cas, d_cas] :
         {std::pair{2, 1}, std::pair{2, 2}, std::pair{4, 3}}) {
      const qicas::CasPartition part =
          qicas::contiguous_partition(sites, sites, n_cas, d_cas);
      // The default 1e-4 refinement grid floors the projection error near
      // 2e-8; a finer grid with matching acceptance thresholds lets the
      // descent resolve the exact basis.
      qicas::QicasConfig cfg;
      cfg.fine_step = 1e-5;
      cfg.eps1 = 1e-12;
      cfg.eps2 = 1e-11;
      const qicas::QicasResult res = qicas::optimize(r, part, cfg);
      worst_f = std::max(worst_f, res.f_star);
      const double e =
          qicas::casci_energy(h, res.u_star, res.partition).e_total;
      worst_e = std::max(worst_e, std::abs(e - gs.energy));
    }
  }
  const bool ok = worst_f < 1e-6 && worst_e < 1e-8;
  return {ok, "max F* = " + fmt(worst_f) + ", max |dE| = " + fmt(worst_e)};
}

// ---- criterion 8: plateau-based size selection ----------------------------

Outcome criterion8() {
  // Two u=4 dimers harboring all the correlation, four near-idle orbitals
  // (two far above, two far below the dimer levels) tied on by 1e-3
  // couplings. Ground truth: the active space is the four dimer orbitals.
  qicas::MolecularHamiltonian h(8, 8, 0, 0.0);
  auto bond = [&](int i, int j, double t) {
    h.h1()(i, j) = t;
    h.h1()(j, i) = t;
  };
  bond(0, 1, -1.0);
  bond(2, 3, -1.0);
  h.h1()(4, 4) = 10.0;
  h.h1()(5, 5) = 10.0;
  h.h1()(6, 6) = -10.0;
  h.h1()(7, 7) = -10.0;
  bond(1, 4, 1e-3);
  bond(3, 5, 1e-3);
  bond(0, 6, 1e-3);
  bond(2, 7, 1e-3);
  for (int i = 0; i < 4; ++i) h.set_eri(i, i, i, i, 4.0);

  const qicas::GroundState gs = qicas::ground_state(h);
  const qicas::SpinTracedRDMs r = qicas::compute_rdms(gs.psi);
  const qicas::TotalEntropyResult total = qicas::optimize_total_entropy(r, {});
  const qicas::EntropyProfile prof = qicas::entropy_profile(total.rdms);
  const qicas::ThresholdDiagram diag =
      qicas::threshold_diagram(prof.entropies);
  const int pick = qicas::suggest_cas_size(diag, 8, 5);
  return {pick == 4, "suggested D_CAS = " + std::to_string(pick)};
}

// ---- criterion 9: pure-state entropies ------------------------------------

Outcome criterion9() {
  double worst = 0.0;
  {
    const qicas::MolecularHamiltonian h =
        qicas::build_hubbard(4, 1.0, 0.0, 4);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.h1());
    const qicas::MolecularHamiltonian ht =
        qicas::transform_integrals(h, es.eigenvectors().transpose());
    const qicas::SpinTracedRDMs r =
        qicas::compute_rdms(qicas::ground_state(ht).psi);
    for (int i = 0; i < 4; ++i) {
      worst = std::max(worst, qicas::orbital_entropy(r, i));
    }
  }
  const double mixed =
      qicas::entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25});
  const double dmix = std::abs(mixed - std::log(4.0));
  const bool ok = worst < 1e-12 && dmix < 1e-12;
  return {ok, "max single-determinant S = " + fmt(worst) +
                  ", |S(1/4,..) - ln 4| = " + fmt(dmix)};
}

// ---- criterion 10: FCIDUMP round trip -------------------------------------

Outcome criterion10() {
  const fs::path dir = QICAS_FIXTURE_DIR;
  for (const char* name : {"hubbard4.fcidump", "twoorb_d_exp.fcidump"}) {
    const qicas::MolecularHamiltonian a =
        qicas::read_fcidump_file(dir / name);
    const qicas::MolecularHamiltonian b =
        qicas::parse_fcidump(qicas::write_fcidump(a));
    const bool equal = a.n_orbitals() == b.n_orbitals() &&
                       a.n_electrons() == b.n_electrons() &&
                       a.ms2() == b.ms2() && a.e_core() == b.e_core() &&
                       a.h1() == b.h1() &&
                       a.eri_storage() == b.eri_storage();
    if (!equal) {
      return {false, std::string("mismatch after round trip: ") + name};
    }
  }
  return {true, "2 fixtures round-trip exactly"};
}

// ---- criterion 11: CLI determinism ----------------------------------------

int run_quiet(const std::string& cmd) {
  const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string run_capture(const std::string& cmd, int* exit_code) {
  std::string out;
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) {
    *exit_code = -1;
    return out;
  }
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  const int rc = pclose(pipe);
  *exit_code = (rc != -1 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome criterion11() {
  const std::string cli = QICAS_CLI_PATH;
  const fs::path root = fs::temp_directory_path() / "qicas_accept_c11";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string dimers =
      (fs::path(QICAS_FIXTURE_DIR) / "dimers6.fcidump").string();

  struct Job {
    std::string name;
    std::string args;
    std::vector<std::string> files;
  };
  const std::vector<Job> jobs = {
      {"qicas",
       "qicas --hubbard 4,1.0,4.0 --cas 2,2 --seed 9",
       {"history.csv", "orbitals.txt", "profile_final.csv", "summary.txt"}},
      {"scan",
       "scan --hubbard 4,1.0,4.0 --cas 2,2 --samples 20 --scale 0.2 --seed 3",
       {"scan.csv", "summary.txt"}},
      {"size", "size --fcidump " + dimers + " --seed 7",
       {"threshold.csv", "history.csv", "profile_total.csv", "summary.txt"}},
      {"pipeline", "pipeline --fcidump " + dimers + " --seed 11",
       {"profile_initial.csv", "profile_final.csv", "history.csv",
        "orbitals.txt", "threshold.csv", "bound.csv", "summary.txt"}},
  };

  for (const Job& job : jobs) {
    const fs::path a = root / (job.name + "_a");
    const fs::path b = root / (job.name + "_b");
    for (const fs::path& dir : {a, b}) {
      const int rc = run_quiet(cli + " " + job.args + " --out " +
                               dir.string());
      if (rc != 0) {
        return {false, job.name + " exited with " + std::to_string(rc)};
      }
    }
    for (const std::string& f : job.files) {
      const std::string ca = slurp(a / f);
      const std::string cb = slurp(b / f);
      if (ca.empty() || ca != cb) {
        return {false, job.name + "/" + f + " differs between reruns"};
      }
    }
  }

  int rc = 0;
  const std::string solve_out =
      run_capture(cli + " solve --hubbard 2,1.0,4.0 --nelec 2", &rc);
  if (rc != 0 || solve_out.find("-0.828427125") == std::string::npos) {
    return {false, "solve output missing the dimer energy"};
  }
  fs::remove_all(root);
  return {true, "4 seeded subcommands byte-identical across reruns"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<std::function<Outcome()>, double>> criteria = {
      {1, {criterion1, 5.0}},    {2, {criterion2, 60.0}},
      {3, {criterion3, 600.0}},  {4, {criterion4, 600.0}},
      {5, {criterion5, 5.0}},    {6, {criterion6, 900.0}},
      {7, {criterion7, 60.0}},   {8, {criterion8, 120.0}},
      {9, {criterion9, 60.0}},   {10, {criterion10, 1.0}},
      {11, {criterion11, 600.0}},
  };

  std::vector<int> selected;
  if (argc < 2 || std::string(argv[1]) == "all") {
    for (const auto& [n, fn] : criteria) selected.push_back(n);
  } else {
    const int n = std::atoi(argv[1]);
    if (!criteria.count(n)) {
      std::fprintf(stderr, "usage: %s <1..11|all>\n", argv[0]);
      return 2;
    }
    selected.push_back(n);
  }

  bool all_pass = true;
  for (int n : selected) {
    const auto& [fn, budget] = criteria.at(n);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (out.pass && secs > budget) {
      out.pass = false;
      out.detail += " [budget " + fmt(budget) + " s exceeded]";
    }
    std::printf("[%s] criterion %d: %s (%.2f s)\n",
                out.pass ? "PASS" : "FAIL", n, out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) all_pass = false;
  }
  return all_pass ? 0 : 1;
}
