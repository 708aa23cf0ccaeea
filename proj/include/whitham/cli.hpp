#pragma once

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "whitham/dispersion.hpp"
#include "whitham/errors.hpp"
#include "whitham/io/checksum.hpp"
#include "whitham/io/config.hpp"
#include "whitham/io/format.hpp"
#include "whitham/io/json_writer.hpp"
#include "whitham/io/manifest.hpp"
#include "whitham/io/records.hpp"
#include "whitham/lp_toolkit.hpp"
#include "whitham/multiplier.hpp"
#include "whitham/oscillatory.hpp"
#include "whitham/resonance.hpp"
#include "whitham/scattering.hpp"
#include "whitham/solver.hpp"

namespace whitham::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr const char* kOutEnv = "WHITHAM_OUT";

/// A bad flag value detected after CLI parsing.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace fs = std::filesystem;

/// --out wins; otherwise $WHITHAM_OUT; otherwise ./whitham_out.
inline fs::path resolve_out(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutEnv); env && *env) return env;
  return "whitham_out";
}

inline std::pair<double, double> parse_range(const std::string& text, const std::string& what) {
  const auto colon = text.find(':', 1);
  if (colon == std::string::npos) throw UsageError(what + ": expected lo:hi, got '" + text + "'");
  try {
    std::size_t p1 = 0, p2 = 0;
    const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
    const double lo = std::stod(a, &p1);
    const double hi = std::stod(b, &p2);
    if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument(text);
    if (!(hi >= lo)) throw UsageError(what + ": need lo <= hi");
    return {lo, hi};
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError(what + ": expected lo:hi, got '" + text + "'");
  }
}

inline std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t p = 0;
      out.push_back(std::stod(item, &p));
      if (p != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(what + ": bad number '" + item + "'");
    }
  }
  return out;
}

inline Symbol parse_symbol(const std::string& name, double alpha) {
  if (name == "whitham") return Symbol::whitham();
  if (name == "kdv") return Symbol::kdv();
  if (name == "fkdv") return Symbol::fractional_kdv(alpha);
  if (name == "half_wave") return Symbol::half_wave();
  throw UsageError("unknown symbol '" + name + "' (whitham, kdv, fkdv, half_wave)");
}

inline void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed to write '" + p.string() + "'");
}

// ---------------------------------------------------------------- simulate

inline const std::set<std::string>& simulate_keys() {
  static const std::set<std::string> keys = {
      "n",          "period",       "dt",         "t_end",         "scheme",       "dealias",
      "epsilon",    "symbol",       "fkdv_alpha", "ic",            "ic_width",     "ic_center",
      "ic_file",    "nonlinearity", "sobolev_index", "z_weight",   "dtf_bands",    "blowup_factor",
      "samples",    "sample_every", "snapshots",  "phase",         "phase_start"};
  return keys;
}

struct SimulationPlan {
  SolverConfig solver;
  std::vector<double> sample_times;
  std::string snapshots = "final"; // none | samples | final
  bool phase = false;
  double phase_start = 1.0;
};

inline SimulationPlan plan_from_config(const io::FlatConfig& c) {
  c.check_known(simulate_keys());
  SimulationPlan p;
  auto& s = p.solver;
  s.grid = GridSpec(static_cast<std::size_t>(c.get_int("n", 4096)), c.get_double("period", 512.0));
  s.dt = c.get_double("dt", 0.1);
  s.t_end = c.get_double("t_end", 100.0);
  const std::string scheme = c.get("scheme", "ifrk4");
  if (scheme == "ifrk4") s.scheme = Scheme::IFRK4;
  else if (scheme == "etdrk4") s.scheme = Scheme::ETDRK4;
  else throw ConfigError("scheme must be ifrk4 or etdrk4, got '" + scheme + "'");
  const std::string dealias = c.get("dealias", "two_thirds");
  if (dealias == "two_thirds") s.dealias = Dealias::TwoThirds;
  else if (dealias == "one_half") s.dealias = Dealias::OneHalf;
  else if (dealias == "none") s.dealias = Dealias::None;
  else throw ConfigError("dealias must be two_thirds, one_half or none, got '" + dealias + "'");
  s.epsilon = c.get_double("epsilon", 0.01);
  try {
    s.symbol = parse_symbol(c.get("symbol", "whitham"), c.get_double("fkdv_alpha", 0.5));
  } catch (const UsageError& e) {
    throw ConfigError(e.what());
  }
  const std::string ic = c.get("ic", "gaussian");
  if (ic == "gaussian") {
    s.ic.kind = InitialCondition::Kind::Gaussian;
    s.ic.width = c.get_double("ic_width", 1.0);
    s.ic.center = c.get_double("ic_center", 0.0);
  } else if (ic == "file") {
    s.ic.kind = InitialCondition::Kind::Spectrum;
    auto f = io::read_spectrum_csv(c.require("ic_file"), s.grid);
    f *= cplx(s.epsilon);
    s.ic.spectrum = std::move(f);
  } else {
    throw ConfigError("ic must be gaussian or file, got '" + ic + "'");
  }
  const std::string nl = c.get("nonlinearity", "defocusing");
  if (nl == "defocusing") s.nonlinear_sign = 1.0;
  else if (nl == "focusing") s.nonlinear_sign = -1.0;
  else if (nl == "linear") s.nonlinear_sign = 0.0;
  else throw ConfigError("nonlinearity must be defocusing, focusing or linear, got '" + nl + "'");
  s.sobolev_index = c.get_double("sobolev_index", 4.0);
  s.z_weight = c.get_double("z_weight", 4.0);
  for (double k : c.get_list("dtf_bands")) s.dtf_bands.push_back(static_cast<int>(k));
  s.blowup_factor = c.get_double("blowup_factor", 100.0);

  if (c.has("samples") && c.has("sample_every")) throw ConfigError("give either samples or sample_every, not both");
  if (c.has("samples")) {
    p.sample_times = c.get_list("samples");
  } else {
    const double every = c.get_double("sample_every", s.t_end > 0.0 ? s.t_end / 10.0 : 1.0);
    if (!(every > 0.0)) throw ConfigError("sample_every must be positive");
    const auto count = static_cast<long>(std::floor(s.t_end / every + 1e-9));
    for (long i = 0; i <= count; ++i) p.sample_times.push_back(static_cast<double>(i) * every);
    if (p.sample_times.back() < s.t_end * (1.0 - 1e-12)) p.sample_times.push_back(s.t_end);
  }
  std::sort(p.sample_times.begin(), p.sample_times.end());
  p.snapshots = c.get("snapshots", "final");
  if (p.snapshots != "none" && p.snapshots != "samples" && p.snapshots != "final")
    throw ConfigError("snapshots must be none, samples or final");
  const std::string phase = c.get("phase", "off");
  if (phase != "on" && phase != "off") throw ConfigError("phase must be on or off");
  p.phase = phase == "on";
  p.phase_start = c.get_double("phase_start", 1.0);
  if (!(p.phase_start > 0.0)) throw ConfigError("phase_start must be positive");
  validate(s);
  for (double t : p.sample_times)
    if (!(t >= 0.0 && t <= s.t_end)) throw ConfigError("sample time " + io::fmt17(t) + " outside [0, t_end]");
  return p;
}

/// Stepping times: samples plus, with the phase on, a geometric lattice of 16
/// points per octave from phase_start so the log-time quadrature stays fine.
inline std::vector<double> stepping_times(const SimulationPlan& p) {
  std::vector<double> t = p.sample_times;
  if (p.phase) {
    for (int i = 0;; ++i) {
      const double s = p.phase_start * std::exp2(i / 16.0);
      if (s >= p.solver.t_end) break;
      t.push_back(s);
    }
    t.push_back(p.solver.t_end);
  }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

inline int run_simulate(const std::string& config_path, const std::vector<std::string>& overrides,
                        const std::string& out_flag, std::ostream& out) {
  auto cfg = io::FlatConfig::load(config_path);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  const SimulationPlan plan = plan_from_config(cfg);
  const fs::path dir = resolve_out(out_flag);
  fs::create_directories(dir);

  io::RunManifest manifest;
  manifest.command = "simulate";
  manifest.config_text = cfg.canonical();
  manifest.config_hash = io::sha256(manifest.config_text);
  manifest.grid_n = plan.solver.grid.size();
  manifest.grid_period = plan.solver.grid.period();
  manifest.scheme = to_string(plan.solver.scheme);
  manifest.started_at = io::utc_now();
  manifest.sample_times = plan.sample_times;
  manifest.schemas = {{"diagnostics", io::kDiagnosticsSchema}, {"snapshot", io::kSnapshotSchema}};
  if (plan.phase) manifest.schemas["phase"] = io::kPhaseSchema;
  std::vector<std::string> files = {"diagnostics.ndjson"};

  auto finish = [&](const std::string& status, const std::string& error) {
    manifest.status = status;
    manifest.error = error;
    manifest.finished_at = io::utc_now();
    manifest.inventory(dir, files);
    manifest.write(dir);
  };

  try {
    std::ofstream diag(dir / "diagnostics.ndjson", std::ios::binary);
    if (!diag) throw std::runtime_error("cannot create diagnostics.ndjson in '" + dir.string() + "'");
    Solver solver(plan.solver);
    std::optional<ScatteringState> phase;
    if (plan.phase) phase.emplace(plan.solver.symbol, solver.profile(), plan.solver.nonlinear_sign);
    const std::set<double> samples(plan.sample_times.begin(), plan.sample_times.end());
    std::size_t snap_index = 0;
    for (double t : stepping_times(plan)) {
      solver.advance_to(t);
      if (phase && t >= plan.phase_start * (1.0 - 1e-12)) phase->accumulate_phase(solver.profile(), t);
      if (!samples.count(t)) continue;
      const auto rec = solver.diagnostics();
      if (!rec.finite()) throw NumericalError("non-finite diagnostics at t = " + io::fmt17(t));
      diag << io::diagnostics_json(rec, plan.solver.dtf_bands) << '\n';
      diag.flush();
      if (!diag) throw std::runtime_error("write error on diagnostics.ndjson");
      const bool snap = plan.snapshots == "samples" || (plan.snapshots == "final" && t == plan.sample_times.back());
      if (snap) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%04zu.csv", snap_index);
        std::ostringstream csv;
        io::write_spectrum_csv(csv, solver.profile());
        write_file(dir / name, csv.str());
        files.push_back(name);
        if (phase) {
          std::snprintf(name, sizeof name, "phase_%04zu.csv", snap_index);
          std::ostringstream pcsv;
          io::write_phase_csv(pcsv, plan.solver.grid, phase->H());
          write_file(dir / name, pcsv.str());
          files.push_back(name);
        }
        manifest.snapshot_times.push_back(t);
        ++snap_index;
      }
    }
  } catch (const std::exception& e) {
    finish("partial", e.what());
    throw;
  }
  finish("complete", "");
  out << "simulate: " << plan.sample_times.size() << " samples written to " << dir.string() << '\n';
  return kExitOk;
}

// -------------------------------------------------------------- scattering

inline int run_scattering(const std::string& dir_flag, const std::string& band_text, double weight, double alpha,
                          bool check, std::ostream& out) {
  const fs::path dir = dir_flag.empty() ? resolve_out("") : fs::path(dir_flag);
  const auto manifest = io::RunManifest::read(dir);
  const auto [lo, hi] = parse_range(band_text, "--band");
  const GridSpec grid(manifest.grid_n, manifest.grid_period);
  std::vector<ScatteringSnapshot> snaps;
  std::vector<std::vector<double>> phases;
  for (std::size_t i = 0; i < manifest.snapshot_times.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%04zu.csv", i);
    auto f = io::read_spectrum_csv((dir / name).string(), grid);
    std::snprintf(name, sizeof name, "phase_%04zu.csv", i);
    if (!fs::exists(dir / name)) throw ConfigError("'" + dir.string() + "' has no phase files; rerun with phase = on");
    auto H = io::read_phase_csv((dir / name).string(), grid);
    SpectralField g(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) g[j] = std::polar(1.0, H[j]) * f[j];
    snaps.push_back({manifest.snapshot_times[i], std::move(f), std::move(g)});
    phases.push_back(std::move(H));
  }
  if (snaps.empty()) throw ConfigError("no snapshots in '" + dir.string() + "'");

  std::vector<ConvergenceReport> dyads;
  std::string ndjson;
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    for (std::size_t j = i + 1; j < snaps.size(); ++j) {
      if (std::fabs(snaps[j].t - 2.0 * snaps[i].t) > 1e-9 * snaps[j].t) continue;
      const auto r = convergence_report(snaps[i], snaps[j], {lo, hi}, weight, alpha);
      dyads.push_back(r);
      io::JsonWriter w;
      w.begin_object()
          .field("t1", r.t1)
          .field("t2", r.t2)
          .field("corrected", r.corrected)
          .field("uncorrected", r.uncorrected)
          .field("ratio", r.uncorrected > 0.0 ? r.corrected / r.uncorrected : 0.0)
          .field("xi_at_corrected", r.xi_at_corrected)
          .end_object();
      ndjson += w.str() + "\n";
    }
  }
  write_file(dir / "scattering_dyads.ndjson", ndjson);
  std::ostringstream csv;
  csv << "xi,re_g,im_g,H\n";
  const auto& last = snaps.back();
  const long n = static_cast<long>(grid.size());
  for (long k = -n / 2; k < n / 2; ++k) {
    const std::size_t j = grid.slot(k);
    csv << io::fmt17(grid.frequency(j)) << ',' << io::fmt17(last.g[j].real()) << ',' << io::fmt17(last.g[j].imag())
        << ',' << io::fmt17(phases.back()[j]) << '\n';
  }
  write_file(dir / "scattering_final.csv", csv.str());

  const auto verdict = cauchy_verdict(dyads);
  io::JsonWriter s;
  s.begin_object().field("summary", true).field("dyads", dyads.size());
  if (dyads.size() >= 2) s.field("kappa", fit_kappa(dyads));
  s.field("nonincreasing", verdict.nonincreasing).field("final_ratio", verdict.final_ratio).field("passed", verdict.passed());
  s.end_object();
  out << ndjson << s.str() << '\n';
  return check && !verdict.passed() ? kExitValidation : kExitOk;
}

// --------------------------------------------------------------- decay-fit

struct DecayFitArgs {
  std::size_t n = 65536;
  double period = 16384.0 * std::numbers::pi;
  std::string symbol = "whitham";
  double symbol_alpha = 0.5;
  std::string profile = "gaussian";
  double width = 1.0;
  int k = 1;
  double beta = 0.0;
  std::string times;
  std::string t_range = "10:1000";
  std::size_t count = 24;
  unsigned jobs = 1;
  std::string expect;
  std::string out;
};

inline int run_decay_fit(const DecayFitArgs& a, std::ostream& out) {
  const GridSpec grid(a.n, a.period);
  const Symbol sym = parse_symbol(a.symbol, a.symbol_alpha);
  SpectralField f(grid);
  if (a.profile == "gaussian") {
    if (!(a.width > 0.0)) throw UsageError("--width must be positive");
    f = SpectralField::from_function(grid, [&](double x) { return std::exp(-x * x / (a.width * a.width)); });
  } else if (a.profile == "band") {
    f = lp::project(SpectralField::from_spectrum(grid, [](double) { return cplx(1.0); }), lp::Band::dyadic(a.k));
  } else {
    throw UsageError("--profile must be gaussian or band");
  }
  std::vector<double> times;
  if (!a.times.empty()) {
    times = parse_list(a.times, "--times");
  } else {
    const auto [t0, t1] = parse_range(a.t_range, "--t-range");
    times = log_spaced(t0, t1, a.count);
  }
  DecayOptions opt;
  opt.jobs = a.jobs;
  const auto rep = decay_scan(sym, f, times, a.beta, opt);
  std::string text;
  for (const auto& s : rep.samples) {
    io::JsonWriter w;
    w.begin_object()
        .field("t", s.t)
        .field("sup", s.sup)
        .field("x_at_sup", s.x_at_sup)
        .field("envelope_ratio", s.envelope_ratio)
        .end_object();
    text += w.str() + "\n";
  }
  bool ok = true;
  io::JsonWriter w;
  w.begin_object()
      .field("summary", true)
      .field("beta", rep.beta)
      .field("exponent", rep.exponent())
      .field("intercept", rep.fit.intercept)
      .field("fit_points", rep.fit.points)
      .field("max_envelope_ratio", rep.max_envelope_ratio)
      .field("z_norm", rep.z_norm)
      .field("weight_norm", rep.weight_norm);
  if (!a.expect.empty()) {
    const auto [lo, hi] = parse_range(a.expect, "--expect");
    ok = rep.exponent() >= lo && rep.exponent() <= hi;
    w.field("expect_lo", lo).field("expect_hi", hi).field("passed", ok);
  }
  w.end_object();
  text += w.str() + "\n";
  if (!a.out.empty()) {
    const fs::path dir = a.out;
    fs::create_directories(dir);
    write_file(dir / "decay.ndjson", text);
    io::RunManifest m;
    m.command = "decay-fit";
    std::ostringstream desc;
    desc << "profile=" << a.profile << " width=" << io::fmt17(a.width) << " k=" << a.k << " beta=" << io::fmt17(a.beta)
         << " symbol=" << a.symbol;
    m.config_text = desc.str();
    m.config_hash = io::sha256(m.config_text);
    m.grid_n = grid.size();
    m.grid_period = grid.period();
    m.started_at = m.finished_at = io::utc_now();
    m.sample_times = times;
    m.inventory(dir, {"decay.ndjson"});
    m.write(dir);
  }
  out << text;
  return ok ? kExitOk : kExitValidation;
}

// --------------------------------------------------------- resonance-check

struct ResonanceArgs {
  std::string symbol = "whitham";
  double symbol_alpha = 0.5;
  double box = 10.0;
  std::size_t samples = 1000000;
  std::uint64_t seed = resonance::ScanOptions{}.seed;
  unsigned jobs = 1;
  int k_min = -10;
  int k_max = 12;
  std::size_t four_samples = 20000;
  std::string out;
};

inline std::string join_point(const std::vector<double>& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ";" : "") + io::fmt17(p[i]);
  return s;
}

inline std::string report_row(const resonance::BoundReport& r) {
  return r.region + "," + std::to_string(r.samples) + "," + io::fmt17(r.min_ratio) + "," + join_point(r.argmin) + "," +
         io::fmt17(r.max_ratio) + "," + join_point(r.argmax) + "\n";
}

inline int run_resonance_check(const ResonanceArgs& a, std::ostream& out) {
  const Symbol sym = parse_symbol(a.symbol, a.symbol_alpha);
  resonance::ScanOptions opt;
  opt.seed = a.seed;
  opt.jobs = a.jobs;
  std::string csv = "region,samples,min_ratio,argmin,max_ratio,argmax\n";
  bool ok = true;
  const auto two = resonance::check_two_wave_bound(sym, a.box, a.samples, opt);
  const auto three = resonance::check_three_wave_bound(sym, a.box, a.samples, opt);
  csv += report_row(two) + report_row(three);
  ok = ok && two.passed() && three.passed();
  for (int k = a.k_min; k <= a.k_max; ++k) {
    const auto four = resonance::check_four_wave_bound(sym, k, a.four_samples, opt);
    csv += report_row(four.primary);
    ok = ok && four.passed();
  }
  if (!a.out.empty()) write_file(a.out, csv);
  out << csv;
  return ok ? kExitOk : kExitValidation;
}

// ------------------------------------------------------------ symbol-table

inline int run_symbol_table(const std::string& symbol, double alpha, const std::string& range, double step,
                            const std::string& out_path, std::ostream& out) {
  const Symbol sym = parse_symbol(symbol, alpha);
  const auto [lo, hi] = parse_range(range, "--range");
  if (!(step > 0.0)) throw UsageError("--step must be positive");
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  std::ostringstream csv;
  csv << "xi,lambda,d1,d2,d3\n";
  for (long i = 0; i <= count; ++i) {
    const double xi = lo + static_cast<double>(i) * step;
    csv << io::fmt17(xi);
    for (int k = 0; k < 4; ++k) {
      double v;
      try {
        v = sym(xi, k);
      } catch (const DomainError&) {
        v = std::numeric_limits<double>::quiet_NaN();
      }
      csv << ',' << io::fmt17(v);
    }
    csv << '\n';
  }
  if (!out_path.empty()) write_file(out_path, csv.str());
  else out << csv.str();
  return kExitOk;
}

// ------------------------------------------------------------------ verify

struct CheckLine {
  std::string name;
  bool passed;
  std::string detail;
};

inline std::vector<CheckLine> verify_symbol() {
  std::vector<CheckLine> out;
  const auto w = Symbol::whitham();
  double odd = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double xi = -50.0 + 100.0 * counter_uniform(1, static_cast<std::uint64_t>(i));
    odd = std::max(odd, std::fabs(w(xi) + w(-xi)));
  }
  out.push_back({"symbol.oddness", odd < 1e-12, "max |L(x)+L(-x)| = " + io::fmt17(odd)});
  double cross = 0.0;
  for (int k = 0; k < 4; ++k)
    cross = std::max(cross, std::fabs(Symbol::whitham_series(0.05, k) - Symbol::whitham_direct(0.05, k)));
  out.push_back({"symbol.crossover", cross < 1e-12, "max series/direct gap = " + io::fmt17(cross)});
  double fd = 0.0;
  for (double xi : {0.2, 1.0, 5.0, 40.0})
    for (int k = 0; k < 3; ++k) {
      const double h = 1e-4 * std::max(1.0, xi);
      const double est = (w(xi + h, k) - w(xi - h, k)) / (2.0 * h);
      fd = std::max(fd, std::fabs(est - w(xi, k + 1)) / std::fabs(w(xi, k + 1)));
    }
  out.push_back({"symbol.derivatives", fd < 1e-6, "max relative FD error = " + io::fmt17(fd)});
  return out;
}

inline std::vector<CheckLine> verify_resonance(unsigned jobs) {
  std::vector<CheckLine> out;
  const auto w = Symbol::whitham();
  resonance::ScanOptions opt;
  opt.jobs = jobs;
  const auto two = resonance::check_two_wave_bound(w, 10.0, 40000, opt);
  out.push_back({"resonance.two_wave", two.passed(), "min ratio " + io::fmt17(two.min_ratio)});
  const auto three = resonance::check_three_wave_bound(w, 10.0, 40000, opt);
  out.push_back({"resonance.three_wave", three.passed(), "min ratio " + io::fmt17(three.min_ratio)});
  bool four_ok = true;
  double four_min = std::numeric_limits<double>::infinity();
  for (int k = -10; k <= 12; ++k) {
    const auto r = resonance::check_four_wave_bound(w, k, 4000, opt);
    four_ok = four_ok && r.passed();
    four_min = std::min(four_min, r.primary.min_ratio);
  }
  out.push_back({"resonance.four_wave", four_ok, "min ratio over k in [-10,12] " + io::fmt17(four_min)});
  return out;
}

inline std::vector<CheckLine> verify_identity() {
  const auto w = Symbol::whitham();
  double worst = 0.0;
  std::size_t used = 0;
  const int channels[3][3] = {{1, 1, -1}, {1, -1, 1}, {-1, 1, 1}};
  for (std::uint64_t i = 0; i < 3000; ++i) {
    resonance::ResonancePoint p;
    p.xi = 0.1 + 9.9 * counter_uniform(11, i, 0);
    p.eta = -10.0 + 20.0 * counter_uniform(11, i, 1);
    p.sigma = -10.0 + 20.0 * counter_uniform(11, i, 2);
    const auto& c = channels[i % 3];
    p.iota1 = c[0];
    p.iota2 = c[1];
    p.iota3 = c[2];
    try {
      const auto d = resonance::phixi_decomposition(w, p);
      const double scale = std::max({1.0, std::fabs(d.phi_xi), std::fabs(d.m1), std::fabs(d.m2), std::fabs(d.m3)});
      worst = std::max(worst, d.residual / scale);
      ++used;
    } catch (const NumericalError&) {
    }
  }
  return {{"identity.phixi", used > 0 && worst < 1e-10,
           "max relative residual " + io::fmt17(worst) + " over " + std::to_string(used) + " points"}};
}

inline std::vector<CheckLine> verify_lp() {
  double worst = 0.0;
  for (double xi = -300.0; xi <= 300.0; xi += 0.37) {
    double s = lp::phi_l(-20, xi);
    for (int k = -19; k <= 12; ++k) s += lp::psi_l(k, xi);
    worst = std::max(worst, std::fabs(s - 1.0));
  }
  double part = 0.0;
  for (double t : {3.0, 10.0, 77.7, 500.0})
    for (double s = 0.0; s <= t; s += t / 997.0) part = std::max(part, std::fabs(lp::TimePartition(t).sum(s) - 1.0));
  return {{"lp.partition_of_unity", worst < 1e-12, "max |sum - 1| = " + io::fmt17(worst)},
          {"lp.time_partition", part < 1e-12, "max |sum q_m - 1| = " + io::fmt17(part)}};
}

inline std::vector<CheckLine> verify_multiplier() {
  using namespace multiplier;
  const double one = s_norm<1>([](const Point<1>& x) { return cplx(lp::phi(x[0])); }, Box<1>::cube(1.75, 32));
  const double three = s_norm<3>(
      [](const Point<3>& x) { return cplx(lp::phi(x[0]) * lp::phi(x[1]) * lp::phi(x[2])); }, Box<3>::cube(1.75, 32));
  const double tens = std::fabs(three / (one * one * one) - 1.0);
  const GridSpec g(64, 32.0);
  const auto f = SpectralField::from_function(g, [](double x) { return std::exp(-x * x / 4.0) * std::cos(x); });
  const auto prod = SpectralField::from_function(g, [](double x) {
    const double v = std::exp(-x * x / 4.0) * std::cos(x);
    return v * v * v;
  });
  const auto t = apply_trilinear([](double, double, double) { return cplx(1.0); }, f, f, f);
  double gap = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) gap = std::max(gap, std::abs(t[j] - prod[j]));
  return {{"multiplier.tensorization", tens < 1e-10, "relative gap " + io::fmt17(tens)},
          {"multiplier.pointwise_product", gap < 1e-12, "max coefficient gap " + io::fmt17(gap)}};
}

inline int run_verify(const std::string& suite, unsigned jobs, std::ostream& out) {
  std::vector<CheckLine> lines;
  auto add = [&](std::vector<CheckLine> v) { lines.insert(lines.end(), v.begin(), v.end()); };
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "symbol") add(verify_symbol()), known = true;
  if (all || suite == "lp") add(verify_lp()), known = true;
  if (all || suite == "resonance") add(verify_resonance(jobs)), known = true;
  if (all || suite == "identity") add(verify_identity()), known = true;
  if (all || suite == "multiplier") add(verify_multiplier()), known = true;
  if (!known) throw UsageError("unknown suite '" + suite + "' (symbol, lp, resonance, identity, multiplier, all)");
  bool ok = true;
  for (const auto& l : lines) {
    out << (l.passed ? "PASS " : "FAIL ") << l.name << "  " << l.detail << '\n';
    ok = ok && l.passed;
  }
  return ok ? kExitOk : kExitValidation;
}

// ---------------------------------------------------------------- dispatch

/// Parses argv and runs one subcommand. Exit codes: 0 success, 1 a check or
/// run failed, 2 usage or configuration error.
inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Numerical laboratory for the modified Whitham equation", "whitham_lab"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  auto* sim = app.add_subcommand("simulate", "Run the pseudospectral solver from a key=value config");
  sim->add_option("--config", config_path, "Config file")->required();
  sim->add_option("--out", out_dir, "Output directory (default $WHITHAM_OUT or ./whitham_out)");
  sim->add_option("--set", overrides, "Override a config entry, key=value (repeatable)");

  std::string scat_dir, band = "1:4";
  double weight = 4.0, alpha = 0.1;
  bool check = false;
  auto* scat = app.add_subcommand("scattering", "Phase-corrected convergence report for a simulation directory");
  scat->add_option("--dir", scat_dir, "Simulation output directory (default $WHITHAM_OUT or ./whitham_out)");
  scat->add_option("--band", band, "Frequency band lo:hi")->capture_default_str();
  scat->add_option("--weight", weight, "Weight exponent w in (1+|xi|^w)")->capture_default_str();
  scat->add_option("--alpha", alpha, "Threshold exponent alpha in t^(-1/3+alpha)")->capture_default_str();
  scat->add_flag("--check", check, "Exit 1 unless the Cauchy check passes");

  DecayFitArgs decay;
  auto* dec = app.add_subcommand("decay-fit", "Linear dispersive decay scan and log-log fit");
  dec->add_option("--n", decay.n, "Grid size (power of two)")->capture_default_str();
  dec->add_option("--period", decay.period, "Grid period")->capture_default_str();
  dec->add_option("--symbol", decay.symbol, "whitham | kdv | fkdv | half_wave")->capture_default_str();
  dec->add_option("--fkdv-alpha", decay.symbol_alpha, "Exponent for fkdv")->capture_default_str();
  dec->add_option("--profile", decay.profile, "gaussian | band")->capture_default_str();
  dec->add_option("--width", decay.width, "Gaussian width")->capture_default_str();
  dec->add_option("--k", decay.k, "Dyadic band index for --profile band")->capture_default_str();
  dec->add_option("--beta", decay.beta, "Derivative order |D|^beta")->capture_default_str();
  dec->add_option("--times", decay.times, "Comma-separated times");
  dec->add_option("--t-range", decay.t_range, "lo:hi for log-spaced times")->capture_default_str();
  dec->add_option("--count", decay.count, "Number of log-spaced times")->capture_default_str();
  dec->add_option("--jobs", decay.jobs, "Worker threads")->capture_default_str();
  dec->add_option("--expect", decay.expect, "Exit 1 unless the fitted exponent lies in lo:hi");
  dec->add_option("--out", decay.out, "Write decay.ndjson and a manifest here");

  ResonanceArgs res;
  auto* rc = app.add_subcommand("resonance-check", "Sampled resonance inequalities");
  rc->add_option("--symbol", res.symbol, "whitham | kdv | fkdv | half_wave")->capture_default_str();
  rc->add_option("--fkdv-alpha", res.symbol_alpha, "Exponent for fkdv")->capture_default_str();
  rc->add_option("--box", res.box, "Box edge for the two/three-wave scans")->capture_default_str();
  rc->add_option("--samples", res.samples, "Stratified samples per scan")->capture_default_str();
  rc->add_option("--four-samples", res.four_samples, "Samples per dyadic k")->capture_default_str();
  rc->add_option("--k-min", res.k_min, "Smallest dyadic index")->capture_default_str();
  rc->add_option("--k-max", res.k_max, "Largest dyadic index")->capture_default_str();
  rc->add_option("--seed", res.seed, "Sampling seed")->capture_default_str();
  rc->add_option("--jobs", res.jobs, "Worker threads")->capture_default_str();
  rc->add_option("--out", res.out, "CSV output file (default stdout)");

  std::string sym_name = "whitham", range = "-5:5", table_out;
  double step = 0.01, sym_alpha = 0.5;
  auto* st = app.add_subcommand("symbol-table", "CSV of the symbol and its first three derivatives");
  st->add_option("--symbol", sym_name, "whitham | kdv | fkdv | half_wave")->capture_default_str();
  st->add_option("--fkdv-alpha", sym_alpha, "Exponent for fkdv")->capture_default_str();
  st->add_option("--range", range, "lo:hi")->capture_default_str();
  st->add_option("--step", step, "Spacing")->capture_default_str();
  st->add_option("--out", table_out, "CSV output file (default stdout)");

  std::string suite = "all";
  unsigned verify_jobs = 1;
  auto* ver = app.add_subcommand("verify", "Quick self-checks; exit 1 if any fails");
  ver->add_option("--suite", suite, "symbol | lp | resonance | identity | multiplier | all")->capture_default_str();
  ver->add_option("--jobs", verify_jobs, "Worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*sim) return run_simulate(config_path, overrides, out_dir, out);
    if (*scat) return run_scattering(scat_dir, band, weight, alpha, check, out);
    if (*dec) return run_decay_fit(decay, out);
    if (*rc) return run_resonance_check(res, out);
    if (*st) return run_symbol_table(sym_name, sym_alpha, range, step, table_out, out);
    if (*ver) return run_verify(suite, verify_jobs, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BandError& e) {
    err << "band error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << '\n';
    return kExitValidation;
  }
  err << app.help();
  return kExitUsage;
}

} // namespace whitham::cli
