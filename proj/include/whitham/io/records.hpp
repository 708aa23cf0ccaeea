#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "whitham/errors.hpp"
#include "whitham/io/format.hpp"
#include "whitham/io/json_writer.hpp"
#include "whitham/solver.hpp"
#include "whitham/spectral_field.hpp"

namespace whitham::io {

inline constexpr const char* kSnapshotSchema = "snapshot.v1";
inline constexpr const char* kPhaseSchema = "phase.v1";
inline constexpr const char* kDiagnosticsSchema = "diagnostics.v1";
inline constexpr const char* kSnapshotHeader = "xi_index,xi,re_fhat,im_fhat";
inline constexpr const char* kPhaseHeader = "xi_index,xi,H";

inline std::string diagnostics_json(const DiagnosticsRecord& r, const std::vector<int>& bands) {
  JsonWriter w;
  w.begin_object();
  w.field("t", r.t);
  w.field("l2_norm", r.l2_norm);
  w.field("hamiltonian", r.hamiltonian);
  w.field("sup_norm", r.sup_norm);
  w.field("sobolev_norm", r.sobolev_norm);
  w.field("z_norm", r.z_norm);
  w.field("weight1", r.weight1);
  w.field("weight2", r.weight2);
  w.key("dtf_band_norms").begin_object();
  for (std::size_t i = 0; i < bands.size() && i < r.dtf_band_norms.size(); ++i)
    w.field(std::to_string(bands[i]), r.dtf_band_norms[i]);
  w.end_object();
  w.end_object();
  return w.str();
}

/// Lattice ordering: signed index from -n/2 to n/2 - 1.
inline void write_spectrum_csv(std::ostream& os, const SpectralField& f) {
  os << kSnapshotHeader << '\n';
  const auto& g = f.grid();
  const long n = static_cast<long>(g.size());
  for (long k = -n / 2; k < n / 2; ++k) {
    const std::size_t j = g.slot(k);
    os << k << ',' << fmt17(g.frequency(j)) << ',' << fmt17(f[j].real()) << ',' << fmt17(f[j].imag()) << '\n';
  }
}

inline void write_phase_csv(std::ostream& os, const GridSpec& g, const std::vector<double>& H) {
  os << kPhaseHeader << '\n';
  const long n = static_cast<long>(g.size());
  for (long k = -n / 2; k < n / 2; ++k) {
    const std::size_t j = g.slot(k);
    os << k << ',' << fmt17(g.frequency(j)) << ',' << fmt17(H[j]) << '\n';
  }
}

namespace detail {
inline std::vector<std::vector<double>> read_numeric_csv(const std::string& path, const std::string& header,
                                                         std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw ConfigError("'" + path + "': expected header '" + header + "'");
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("'" + path + "':" + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (row.size() != columns) throw ConfigError("'" + path + "':" + std::to_string(lineno) + ": wrong column count");
    rows.push_back(std::move(row));
  }
  return rows;
}
} // namespace detail

inline SpectralField read_spectrum_csv(const std::string& path, const GridSpec& g) {
  const auto rows = detail::read_numeric_csv(path, kSnapshotHeader, 4);
  if (rows.size() != g.size())
    throw ConfigError("'" + path + "': " + std::to_string(rows.size()) + " rows for a grid of " +
                      std::to_string(g.size()));
  SpectralField f(g);
  for (const auto& r : rows) {
    const long k = static_cast<long>(r[0]);
    if (k < -static_cast<long>(g.size()) / 2 || k >= static_cast<long>(g.size()) / 2)
      throw ConfigError("'" + path + "': index " + std::to_string(k) + " outside the lattice");
    f[g.slot(k)] = cplx(r[2], r[3]);
  }
  return f;
}

inline std::vector<double> read_phase_csv(const std::string& path, const GridSpec& g) {
  const auto rows = detail::read_numeric_csv(path, kPhaseHeader, 3);
  if (rows.size() != g.size()) throw ConfigError("'" + path + "': row count does not match the grid");
  std::vector<double> H(g.size());
  for (const auto& r : rows) H[g.slot(static_cast<long>(r[0]))] = r[2];
  return H;
}

} // namespace whitham::io
