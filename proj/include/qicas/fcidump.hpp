// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qicas/errors.hpp"
#include "qicas/hamiltonian.hpp"

// FCIDUMP text format:
//   &FCI NORB=4,NELEC=4,MS2=0, ORBSYM=1,1,1,1, ISYM=1, &END
//   <value> i j k l          (1-based indices)
// Lines with all-zero indices set the core energy, k=l=0 sets h1[i][j],
// otherwise the line sets the chemists'-notation integral (ij|kl).
// Fortran double-precision exponents (1.0D-3) are accepted. ORBSYM and
// other unknown header keys are parsed and ignored. A value may be listed
// repeatedly (under any of its 8 symmetry images); repeats must agree to
// 1e-12 or the file is rejected as inconsistent.

namespace qicas {

namespace detail {

inline std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// Parse a floating-point token, accepting Fortran D/d exponent markers.
inline double parse_fortran_double(const std::string& token) {
  std::string t = token;
  for (char& c : t) {
    if (c == 'D' || c == 'd') c = 'E';
  }
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw format_error("malformed numeric token '" + token + "'");
  }
  if (pos != t.size()) {
    throw format_error("malformed numeric token '" + token + "'");
  }
  return v;
}

inline long parse_integer(const std::string& token) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(token, &pos);
  } catch (const std::exception&) {
    throw format_error("malformed integer token '" + token + "'");
  }
  if (pos != token.size()) {
    throw format_error("malformed integer token '" + token + "'");
  }
  return v;
}

}  // namespace detail

struct FcidumpHeader {
  int norb = 0;
  int nelec = 0;
  int ms2 = 0;
  std::vector<int> orbsym;  // parsed and otherwise ignored
};

// Parse the namelist header; consumes text up to and including the
// terminator ("&END" or a bare "/") and returns it with the remainder.
inline FcidumpHeader parse_fcidump_header(const std::string& text,
                                          std::size_t* body_start) {
  const std::size_t amp = text.find('&');
  if (amp == std::string::npos) {
    throw format_error("FCIDUMP header missing '&' namelist start");
  }
  // Find the terminator.
  std::size_t end_pos = std::string::npos;
  std::size_t body = 0;
  const std::size_t amp_end = detail::upper(text).find("&END", amp + 1);
  const std::size_t slash = text.find('/', amp + 1);
  if (amp_end != std::string::npos &&
      (slash == std::string::npos || amp_end < slash)) {
    end_pos = amp_end;
    body = amp_end + 4;
  } else if (slash != std::string::npos) {
    end_pos = slash;
    body = slash + 1;
  } else {
    throw format_error("FCIDUMP header missing '&END' or '/' terminator");
  }

  // Header content between the namelist name and the terminator.
  std::size_t content_begin = amp + 1;
  while (content_begin < end_pos &&
         !std::isspace(static_cast<unsigned char>(text[content_begin]))) {
    ++content_begin;  // skip the namelist name (FCI)
  }
  std::string content = text.substr(content_begin, end_pos - content_begin);
  for (char& c : content) {
    if (c == ',' || c == '\n' || c == '\r' || c == '\t') c = ' ';
  }

  // Tokenize into KEY=VALUE groups; values may be comma-separated lists
  // that the loop above has already split into bare tokens.
  FcidumpHeader hdr;
  bool saw_norb = false, saw_nelec = false, saw_ms2 = false;
  std::istringstream in(content);
  std::string tok;
  std::string pending_key;
  while (in >> tok) {
    std::string key, value;
    const std::size_t eq = tok.find('=');
    if (eq != std::string::npos) {
      key = detail::upper(tok.substr(0, eq));
      value = tok.substr(eq + 1);
      pending_key = key;
    } else if (!pending_key.empty()) {
      key = pending_key;  // continuation of a list value such as ORBSYM
      value = tok;
    } else {
      throw format_error("garbled FCIDUMP header token '" + tok + "'");
    }
    if (value.empty()) {
      // "KEY=" with the value in the next token.
      if (!(in >> value)) {
        throw format_error("FCIDUMP header key '" + key + "' lacks a value");
      }
    }
    if (key == "NORB") {
      hdr.norb = static_cast<int>(detail::parse_integer(value));
      saw_norb = true;
    } else if (key == "NELEC") {
      hdr.nelec = static_cast<int>(detail::parse_integer(value));
      saw_nelec = true;
    } else if (key == "MS2") {
      hdr.ms2 = static_cast<int>(detail::parse_integer(value));
      saw_ms2 = true;
    } else if (key == "ORBSYM") {
      hdr.orbsym.push_back(static_cast<int>(detail::parse_integer(value)));
    }
    // Other keys (ISYM, IUHF, ...) are ignored.
  }
  if (!saw_norb) throw format_error("FCIDUMP header missing NORB");
  if (!saw_nelec) throw format_error("FCIDUMP header missing NELEC");
  if (!saw_ms2) throw format_error("FCIDUMP header missing MS2");
  if (hdr.norb <= 0) throw format_error("FCIDUMP NORB must be positive");
  if (body_start) *body_start = body;
  return hdr;
}

// Parse a full FCIDUMP text into a Hamiltonian. Omitted integrals are zero.
inline MolecularHamiltonian parse_fcidump(const std::string& text) {
  std::size_t body_start = 0;
  const FcidumpHeader hdr = parse_fcidump_header(text, &body_start);
  MolecularHamiltonian h(hdr.norb, hdr.nelec, hdr.ms2);

  const int d = hdr.norb;
  std::vector<char> seen_eri(h.eri_storage().size(), 0);
  Eigen::Matrix<char, Eigen::Dynamic, Eigen::Dynamic> seen_h1 =
      Eigen::Matrix<char, Eigen::Dynamic, Eigen::Dynamic>::Zero(d, d);
  bool seen_core = false;
  double core = 0.0;
  constexpr double kDupTol = 1e-12;

  std::istringstream body(text.substr(body_start));
  std::string line;
  while (std::getline(body, line)) {
    std::istringstream ls(line);
    std::string vtok;
    if (!(ls >> vtok)) continue;  // blank line
    const double value = detail::parse_fortran_double(vtok);
    long idx[4];
    for (int k = 0; k < 4; ++k) {
      std::string itok;
      if (!(ls >> itok)) {
        throw format_error("FCIDUMP line has fewer than four indices: '" +
                           line + "'");
      }
      idx[k] = detail::parse_integer(itok);
    }
    std::string extra;
    if (ls >> extra) {
      throw format_error("trailing token '" + extra + "' on FCIDUMP line");
    }
    for (long v : idx) {
      if (v < 0 || v > d) {
        throw range_error("FCIDUMP orbital index " + std::to_string(v) +
                          " outside [0, NORB]");
      }
    }
    const long i = idx[0], j = idx[1], k = idx[2], l = idx[3];
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      if (seen_core && std::abs(core - value) > kDupTol) {
        throw consistency_error("conflicting duplicate core-energy entries");
      }
      core = value;
      seen_core = true;
    } else if (k == 0 && l == 0) {
      if (i == 0 || j == 0) {
        throw format_error("one-electron FCIDUMP line with a zero index: '" +
                           line + "'");
      }
      const int a = static_cast<int>(i) - 1, b = static_cast<int>(j) - 1;
      const double old = h.h1()(a, b);
      if ((seen_h1(a, b) || seen_h1(b, a)) && std::abs(old - value) > kDupTol) {
        throw consistency_error("conflicting duplicate h1 entries at (" +
                                std::to_string(i) + "," + std::to_string(j) +
                                ")");
      }
      h.h1()(a, b) = value;
      h.h1()(b, a) = value;
      seen_h1(a, b) = seen_h1(b, a) = 1;
    } else if (i != 0 && j != 0 && k != 0 && l != 0) {
      const std::size_t slot = detail::canonical_eri_index(
          static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1),
          static_cast<std::size_t>(k - 1), static_cast<std::size_t>(l - 1));
      if (seen_eri[slot] &&
          std::abs(h.eri_storage()[slot] - value) > kDupTol) {
        throw consistency_error("conflicting duplicate integral entries at (" +
                                std::to_string(i) + "," + std::to_string(j) +
                                "|" + std::to_string(k) + "," +
                                std::to_string(l) + ")");
      }
      h.set_eri(static_cast<int>(i) - 1, static_cast<int>(j) - 1,
                static_cast<int>(k) - 1, static_cast<int>(l) - 1, value);
      seen_eri[slot] = 1;
    } else {
      throw format_error("FCIDUMP line with unsupported zero-index pattern: '" +
                         line + "'");
    }
  }
  h.set_e_core(core);
  return h;
}

inline MolecularHamiltonian read_fcidump_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw format_error("cannot open FCIDUMP file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_fcidump(buf.str());
}

// Serialize with 17 significant digits so a parse round-trip is exact.
inline std::string write_fcidump(const MolecularHamiltonian& h) {
  const int d = h.n_orbitals();
  std::ostringstream out;
  out << "&FCI NORB=" << d << ",NELEC=" << h.n_electrons()
      << ",MS2=" << h.ms2() << ",\n  ORBSYM=";
  for (int i = 0; i < d; ++i) out << "1,";
  out << "\n  ISYM=1,\n&END\n";
  char buf[64];
  auto emit = [&](double v, int i, int j, int k, int l) {
    std::snprintf(buf, sizeof(buf), "%24.17E %4d %4d %4d %4d\n", v, i, j, k, l);
    out << buf;
  };
  for (int p = 0; p < d; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r <= p; ++r)
        for (int s = 0; s <= r; ++s) {
          if (detail::pair_index(p, q) < detail::pair_index(r, s)) continue;
          const double v = h.eri(p, q, r, s);
          if (v != 0.0) emit(v, p + 1, q + 1, r + 1, s + 1);
        }
  for (int p = 0; p < d; ++p)
    for (int q = 0; q <= p; ++q)
      if (h.h1()(p, q) != 0.0) emit(h.h1()(p, q), p + 1, q + 1, 0, 0);
  emit(h.e_core(), 0, 0, 0, 0);
  return out.str();
}

inline void write_fcidump_file(const MolecularHamiltonian& h,
                               const std::string& path) {
  std::ofstream out(path);
  if (!out) throw format_error("cannot open '" + path + "' for writing");
  out << write_fcidump(h);
}

// Orbital-rotation text format: first line D, then D rows of D coefficients;
// row i holds the expansion of orbital i in the reference basis.
inline std::string write_orbitals(const Eigen::MatrixXd& u) {
  if (u.rows() != u.cols()) {
    throw dimension_error("orbital matrix must be square");
  }
  std::ostringstream out;
  out << u.rows() << "\n";
  char buf[40];
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", u(i, j));
      out << buf << (j + 1 == u.cols() ? "\n" : " ");
    }
  }
  return out.str();
}

inline void write_orbitals_file(const Eigen::MatrixXd& u,
                                const std::string& path) {
  std::ofstream out(path);
  if (!out) throw format_error("cannot open '" + path + "' for writing");
  out << write_orbitals(u);
}

inline Eigen::MatrixXd parse_orbitals(const std::string& text) {
  std::istringstream in(text);
  long d = 0;
  if (!(in >> d) || d <= 0) {
    throw format_error("orbital file must start with a positive dimension");
  }
  Eigen::MatrixXd u(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) {
      std::string tok;
      if (!(in >> tok)) {
        throw format_error("orbital file truncated at row " +
                           std::to_string(i));
      }
      u(i, j) = detail::parse_fortran_double(tok);
    }
  return u;
}

inline Eigen::MatrixXd read_orbitals_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw format_error("cannot open orbital file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_orbitals(buf.str());
}

}  // namespace qicas
