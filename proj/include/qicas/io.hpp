// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qicas/analysis.hpp"
#include "qicas/correlation.hpp"
#include "qicas/errors.hpp"
#include "qicas/optimizer.hpp"

namespace qicas {

// Round-trip exact float formatting used for every CSV cell, so identical
// runs produce byte-identical files.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string fmt_fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw format_error("cannot open '" + path.string() + "' for writing");
  }
  out << content;
}

// orbital_index,lambda0,lambda1,lambda2,lambda3,occupancy,entropy
inline std::string entropy_profile_csv(const EntropyProfile& p) {
  std::ostringstream out;
  out << "orbital_index,lambda0,lambda1,lambda2,lambda3,occupancy,entropy\n";
  for (std::size_t i = 0; i < p.spectra.size(); ++i) {
    out << i;
    for (double l : p.spectra[i].lambda) out << "," << fmt17(l);
    out << "," << fmt17(p.spectra[i].occupancy) << ","
        << fmt17(p.entropies[i]) << "\n";
  }
  return out.str();
}

// i,j,value upper triangle of the mutual-information matrix.
inline std::string mutual_information_csv(const Eigen::MatrixXd& m) {
  std::ostringstream out;
  out << "i,j,value\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      out << i << "," << j << "," << fmt17(m(i, j)) << "\n";
    }
  return out.str();
}

// cycle,f_qi with cycle 0 holding the starting cost.
inline std::string history_csv(const std::vector<double>& history) {
  std::ostringstream out;
  out << "cycle,f_qi\n";
  for (std::size_t i = 0; i < history.size(); ++i) {
    out << i << "," << fmt17(history[i]) << "\n";
  }
  return out.str();
}

inline std::string threshold_csv(const ThresholdDiagram& d) {
  std::ostringstream out;
  out << "threshold,count\n";
  for (std::size_t i = 0; i < d.thresholds.size(); ++i) {
    out << fmt17(d.thresholds[i]) << "," << d.counts[i] << "\n";
  }
  return out.str();
}

inline std::string scan_csv(const std::vector<ScanSample>& samples) {
  std::ostringstream out;
  out << "f_qi,e_casci,seed\n";
  for (const ScanSample& s : samples) {
    out << fmt17(s.f_qi) << "," << fmt17(s.e_casci) << "," << s.seed << "\n";
  }
  return out.str();
}

inline std::string bound_csv(const BoundReport& r) {
  std::ostringstream out;
  out << "field,value\n";
  out << "e_fci," << fmt17(r.e_fci) << "\n";
  out << "e_casci," << fmt17(r.e_casci) << "\n";
  out << "delta_e," << fmt17(r.delta_e) << "\n";
  out << "delta_e_prime," << fmt17(r.delta_e_prime) << "\n";
  out << "delta_e_max," << fmt17(r.delta_e_max) << "\n";
  out << "epsilon," << fmt17(r.epsilon) << "\n";
  out << "f_qi," << fmt17(r.f_qi) << "\n";
  out << "k_factor," << fmt17(r.k_factor) << "\n";
  out << "bound_rhs," << fmt17(r.bound_rhs) << "\n";
  out << "tight_rhs," << fmt17(r.tight_rhs) << "\n";
  out << "epsilon_lt_half," << (r.epsilon_lt_half ? 1 : 0) << "\n";
  out << "holds_a," << (r.holds_a ? 1 : 0) << "\n";
  out << "holds_b," << (r.holds_b ? 1 : 0) << "\n";
  out << "holds_c," << (r.holds_c ? 1 : 0) << "\n";
  out << "holds_d," << (r.holds_d ? 1 : 0) << "\n";
  out << "chain_holds," << (r.chain_holds ? 1 : 0) << "\n";
  return out.str();
}

// Deterministic key=value block (sorted keys), used for summaries and
// run manifests.
inline std::string key_value_block(const std::map<std::string, std::string>& kv) {
  std::ostringstream out;
  for (const auto& [k, v] : kv) out << k << "=" << v << "\n";
  return out.str();
}

// key=value configuration file: blank lines and '#' comments ignored.
inline std::map<std::string, std::string> parse_key_value(
    const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw format_error("config line " + std::to_string(lineno) +
                         " is not key=value: '" + line + "'");
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw format_error("config line " + std::to_string(lineno) +
                         " has an empty key");
    }
    kv[key] = value;
  }
  return kv;
}

}  // namespace qicas
