#pragma once

// Parameter sweeps over (K, xi), their CSV/JSON serializations, figure data
// sets and the randomized oracle cross-check.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "fermicorr/amplitudes.hpp"
#include "fermicorr/measures.hpp"
#include "fermicorr/oracles.hpp"
#include "fermicorr/state_json.hpp"

namespace fermicorr {

/// Couplings of the default sweep: weak, medium and the strongest value whose
/// whole xi in [0, 2] range stays inside the second-order regime at cutoff 50.
inline const std::vector<double> kDefaultCouplings = {0.02, 0.05, 0.08};

struct SweepSpec {
  double xi_min = 0.0;
  double xi_max = 2.0;
  int xi_steps = 401;
  std::vector<double> couplings = kDefaultCouplings;
  ModelParams params{};  // params.coupling is ignored; couplings drives K
  std::string output_path;

  void validate() const {
    if (!(xi_min >= 0.0) || !(xi_max > xi_min)) throw ValidationError("SweepSpec: need 0 <= xi_min < xi_max");
    if (xi_steps < 2) throw ValidationError("SweepSpec: xi_steps must be >= 2");
    if (couplings.empty()) throw ValidationError("SweepSpec: couplings must be non-empty");
    for (double k : couplings)
      if (!(k >= 0.0) || !std::isfinite(k)) throw ValidationError("SweepSpec: couplings must be >= 0");
    ModelParams p = params;
    p.coupling = 0.0;
    p.validate();
  }

  std::vector<double> xi_grid() const {
    std::vector<double> g(static_cast<std::size_t>(xi_steps));
    const double step = (xi_max - xi_min) / (xi_steps - 1);
    for (int i = 0; i < xi_steps; ++i) g[static_cast<std::size_t>(i)] = xi_min + step * i;
    g.back() = xi_max;
    return g;
  }
};

struct SweepRow {
  double xi = 0.0;
  double coupling = 0.0;
  double r_bar = 0.0;
  double cutoff = 0.0;
  PerturbativeAmplitudes amps;
  XStateCoefficients coeffs;
  CorrelationReport report;
};

/// Amplitudes at K = 1 along a xi grid; any coupling is a rescale away.
struct UnitAmplitudes {
  ModelParams params;
  std::vector<PerturbativeAmplitudes> points;
};

inline UnitAmplitudes unit_amplitudes(const ModelParams& params, const std::vector<double>& xi_grid) {
  UnitAmplitudes u{params, {}};
  u.params.coupling = 1.0;
  u.params.validate();
  u.points.reserve(xi_grid.size());
  for (double xi : xi_grid) u.points.push_back(compute_amplitudes(u.params, xi));
  return u;
}

inline SweepRow make_row(const ModelParams& params, const PerturbativeAmplitudes& amps) {
  SweepRow row;
  row.xi = amps.xi;
  row.coupling = params.coupling;
  row.r_bar = params.r_bar;
  row.cutoff = params.cutoff;
  row.amps = amps;
  const AssembledState state = assemble(params, amps);
  row.coeffs = state.coeffs;
  row.report = report(state.rho, state.coeffs, amps);
  return row;
}

/// Rows ordered by (K, xi) ascending. Throws OutOfRegimeError at the first
/// (K, xi) whose |eg> population is not positive.
inline std::vector<SweepRow> rows_for_couplings(const UnitAmplitudes& unit, std::vector<double> couplings) {
  std::sort(couplings.begin(), couplings.end());
  std::vector<SweepRow> rows;
  rows.reserve(couplings.size() * unit.points.size());
  for (double k : couplings) {
    ModelParams p = unit.params;
    p.coupling = k;
    for (const auto& a : unit.points) rows.push_back(make_row(p, rescale_coupling(a, 1.0, k)));
  }
  return rows;
}

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  return rows_for_couplings(unit_amplitudes(spec.params, spec.xi_grid()), spec.couplings);
}

// ---------------------------------------------------------------------------
// CSV

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Column {
  const char* name;
  std::function<double(const SweepRow&)> value;
};

inline const std::vector<Column>& sweep_columns() {
  static const std::vector<Column> cols = {
      {"xi", [](const SweepRow& r) { return r.xi; }},
      {"K", [](const SweepRow& r) { return r.coupling; }},
      {"r_bar", [](const SweepRow& r) { return r.r_bar; }},
      {"cutoff", [](const SweepRow& r) { return r.cutoff; }},
      {"re_A", [](const SweepRow& r) { return r.amps.re_A; }},
      {"re_X", [](const SweepRow& r) { return r.amps.x_exch.real(); }},
      {"im_X", [](const SweepRow& r) { return r.amps.x_exch.imag(); }},
      {"u2", [](const SweepRow& r) { return r.amps.u2; }},
      {"v2", [](const SweepRow& r) { return r.amps.v2; }},
      {"re_L", [](const SweepRow& r) { return r.amps.l.real(); }},
      {"im_L", [](const SweepRow& r) { return r.amps.l.imag(); }},
      {"g2", [](const SweepRow& r) { return r.amps.g2; }},
      {"c", [](const SweepRow& r) { return r.coeffs.c; }},
      {"sqrtD", [](const SweepRow& r) { return r.report.sqrt_discord; }},
      {"negativity", [](const SweepRow& r) { return r.report.negativity; }},
      {"conn_corr", [](const SweepRow& r) { return r.report.connected_corr; }},
      {"bell_chsh", [](const SweepRow& r) { return r.report.bell_chsh; }},
      {"bell_opt", [](const SweepRow& r) { return r.report.bell_opt; }},
      {"hierarchy_ok", [](const SweepRow& r) { return r.report.hierarchy_ok ? 1.0 : 0.0; }},
  };
  return cols;
}

inline const Column& column(const std::string& name) {
  for (const auto& c : sweep_columns())
    if (name == c.name) return c;
  throw ValidationError("unknown CSV column: " + name);
}

inline const std::vector<std::string> kAmplitudeColumns = {"xi", "K",    "r_bar", "cutoff", "re_A", "re_X", "im_X",
                                                           "u2", "v2",   "re_L",  "im_L",   "g2",   "c"};

inline std::vector<std::string> all_column_names() {
  std::vector<std::string> names;
  for (const auto& c : sweep_columns()) names.emplace_back(c.name);
  return names;
}

/// Comma separated, header row first, LF line endings, %.17g numbers.
/// `extra` appends constant-valued columns (e.g. a reference line).
inline void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, const std::vector<std::string>& names,
                      const std::vector<std::pair<std::string, double>>& extra = {}) {
  std::vector<const Column*> cols;
  for (const auto& n : names) cols.push_back(&column(n));
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
  for (const auto& [name, value] : extra) out << ',' << name;
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out << ',';
      if (names[i] == "hierarchy_ok")
        out << (row.report.hierarchy_ok ? '1' : '0');
      else
        out << format_number(cols[i]->value(row));
    }
    for (const auto& [name, value] : extra) out << ',' << format_number(value);
    out << '\n';
  }
}

inline void write_csv_file(const std::filesystem::path& path, const std::vector<SweepRow>& rows,
                           const std::vector<std::string>& names,
                           const std::vector<std::pair<std::string, double>>& extra = {}) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_csv(f, rows, names, extra);
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// State dump

struct StateDump {
  ModelParams params;
  PerturbativeAmplitudes amps;
  XStateCoefficients coeffs;
  TwoQubitDensityMatrix rho;
};

inline StateDump make_state(const ModelParams& params, double xi) {
  const PerturbativeAmplitudes amps = compute_amplitudes(params, xi);
  const AssembledState s = assemble(params, amps);
  return {params, amps, s.coeffs, s.rho};
}

inline ordered_json to_json(const StateDump& s) {
  ordered_json j;
  j["params"] = {{"r_bar", s.params.r_bar},
                 {"K", s.params.coupling},
                 {"cutoff", s.params.cutoff},
                 {"quad_points", s.params.quad_points},
                 {"include_two_photon", s.params.include_two_photon}};
  j["amplitudes"] = {{"xi", s.amps.xi},
                     {"re_A", s.amps.re_A},
                     {"re_X", s.amps.x_exch.real()},
                     {"im_X", s.amps.x_exch.imag()},
                     {"u2", s.amps.u2},
                     {"v2", s.amps.v2},
                     {"re_L", s.amps.l.real()},
                     {"im_L", s.amps.l.imag()},
                     {"g2", s.amps.g2},
                     {"two_photon_enabled", s.amps.two_photon_enabled}};
  j["coefficients"] = {{"rho11", s.coeffs.rho11},
                       {"rho22", s.coeffs.rho22},
                       {"rho33", s.coeffs.rho33},
                       {"rho44", s.coeffs.rho44},
                       {"re_rho14", s.coeffs.rho14.real()},
                       {"im_rho14", s.coeffs.rho14.imag()},
                       {"re_rho23", s.coeffs.rho23.real()},
                       {"im_rho23", s.coeffs.rho23.imag()},
                       {"c", s.coeffs.c}};
  j["rho"] = to_json(s.rho);
  return j;
}

/// JSON document for the assembled state at one xi.
inline ordered_json state_dump(const ModelParams& params, double xi) { return to_json(make_state(params, xi)); }

inline StateDump load_state_dump(const ordered_json& j) {
  try {
    StateDump s;
    const auto& p = j.at("params");
    s.params.r_bar = p.at("r_bar").get<double>();
    s.params.coupling = p.at("K").get<double>();
    s.params.cutoff = p.at("cutoff").get<double>();
    s.params.quad_points = p.at("quad_points").get<int>();
    s.params.include_two_photon = p.at("include_two_photon").get<bool>();
    const auto& a = j.at("amplitudes");
    s.amps.xi = a.at("xi").get<double>();
    s.amps.re_A = a.at("re_A").get<double>();
    s.amps.x_exch = {a.at("re_X").get<double>(), a.at("im_X").get<double>()};
    s.amps.u2 = a.at("u2").get<double>();
    s.amps.v2 = a.at("v2").get<double>();
    s.amps.l = {a.at("re_L").get<double>(), a.at("im_L").get<double>()};
    s.amps.g2 = a.at("g2").get<double>();
    s.amps.two_photon_enabled = a.at("two_photon_enabled").get<bool>();
    const auto& c = j.at("coefficients");
    s.coeffs.rho11 = c.at("rho11").get<double>();
    s.coeffs.rho22 = c.at("rho22").get<double>();
    s.coeffs.rho33 = c.at("rho33").get<double>();
    s.coeffs.rho44 = c.at("rho44").get<double>();
    s.coeffs.rho14 = {c.at("re_rho14").get<double>(), c.at("im_rho14").get<double>()};
    s.coeffs.rho23 = {c.at("re_rho23").get<double>(), c.at("im_rho23").get<double>()};
    s.coeffs.c = c.at("c").get<double>();
    s.rho = state_from_json(j.at("rho"));
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed state dump: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Oracle cross-check

struct OracleComparison {
  std::string measure;
  std::string kind;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::uint64_t worst_seed = 0;
  bool passed() const { return max_deviation <= tolerance; }
};

struct OracleCheckReport {
  std::vector<OracleComparison> comparisons;
  bool passed() const {
    return std::all_of(comparisons.begin(), comparisons.end(), [](const auto& c) { return c.passed(); });
  }
};

inline constexpr double kOracleTolDiscord = 1e-5;
inline constexpr double kOracleTolConnected = 1e-5;
inline constexpr double kOracleTolNegativity = 1e-12;
inline constexpr double kOracleTolBell = 1e-5;

/// Entries of an X-pattern state as normalized coefficients.
inline XStateCoefficients xstate_coefficients(const TwoQubitDensityMatrix& rho) {
  const Matrix4c& m = rho.matrix();
  XStateCoefficients k;
  k.rho11 = m(0, 0).real();
  k.rho22 = m(1, 1).real();
  k.rho33 = m(2, 2).real();
  k.rho44 = m(3, 3).real();
  k.rho14 = m(0, 3);
  k.rho23 = m(1, 2);
  k.c = k.rho11 + k.rho22 + k.rho33 + k.rho44;
  return k;
}

inline const char* kind_name(StateKind k) {
  switch (k) {
    case StateKind::pure: return "pure";
    case StateKind::mixed: return "mixed";
    case StateKind::xshape: return "xshape";
  }
  return "?";
}

/// Runs every oracle-versus-formula comparison on `count` random states of each
/// kind; state i of every kind uses seed + i.
inline OracleCheckReport oracle_check(int count, std::uint64_t seed, const oracles::DirectionGrid& grid = {}) {
  if (count < 1) throw ValidationError("oracle-check: count must be >= 1");
  grid.validate();
  OracleCheckReport rep;
  for (StateKind kind : {StateKind::pure, StateKind::mixed, StateKind::xshape}) {
    OracleComparison disc{"geometric_discord", kind_name(kind), 0.0, kOracleTolDiscord, seed};
    OracleComparison corr{"connected_correlation", kind_name(kind), 0.0, kOracleTolConnected, seed};
    OracleComparison neg{"negativity", kind_name(kind), 0.0, kOracleTolNegativity, seed};
    OracleComparison bell{"bell_opt", kind_name(kind), 0.0, kOracleTolBell, seed};
    auto track = [](OracleComparison& c, double dev, std::uint64_t s) {
      if (dev > c.max_deviation) {
        c.max_deviation = dev;
        c.worst_seed = s;
      }
    };
    for (int i = 0; i < count; ++i) {
      const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
      const TwoQubitDensityMatrix rho = random_state(s, kind);
      track(disc, std::abs(oracles::discord_bruteforce(rho, grid) - geometric_discord(rho)), s);
      track(corr, std::abs(oracles::maxcorr_bruteforce(rho, grid).value - connected_correlation(rho)), s);
      track(neg, std::abs(oracles::negativity_eig(rho) - negativity(rho)), s);
      if (kind == StateKind::xshape)
        track(bell, std::abs(oracles::chsh_gridopt(rho, grid) - bell_opt(xstate_coefficients(rho))), s);
    }
    rep.comparisons.push_back(disc);
    rep.comparisons.push_back(corr);
    rep.comparisons.push_back(neg);
    if (kind == StateKind::xshape) rep.comparisons.push_back(bell);
  }
  return rep;
}

inline void print_report(std::ostream& out, const OracleCheckReport& rep) {
  for (const auto& c : rep.comparisons) {
    out << (c.passed() ? "PASS " : "FAIL ") << c.measure << " [" << c.kind << "] max_dev=" << format_number(c.max_deviation)
        << " tol=" << format_number(c.tolerance) << " worst_seed=" << c.worst_seed << '\n';
  }
  out << (rep.passed() ? "oracle-check: all comparisons within tolerance\n" : "oracle-check: tolerance breach\n");
}

// ---------------------------------------------------------------------------
// Figures

struct FigureSpec {
  SweepSpec sweep{};  // xi grid, params and the weak/medium/strong couplings
  int surface_couplings = 8;
};

/// K values for the (xi, K) surface: evenly spaced up to the largest sweep coupling.
inline std::vector<double> surface_couplings(const FigureSpec& f) {
  const double kmax = *std::max_element(f.sweep.couplings.begin(), f.sweep.couplings.end());
  std::vector<double> ks;
  for (int i = 1; i <= f.surface_couplings; ++i) ks.push_back(kmax * i / f.surface_couplings);
  return ks;
}

/// Writes fig1.csv, fig4.csv and fig5.csv into out_dir.
inline std::vector<std::filesystem::path> figures(const std::filesystem::path& out_dir, const FigureSpec& f) {
  f.sweep.validate();
  if (f.surface_couplings < 2) throw ValidationError("figures: surface_couplings must be >= 2");
  std::filesystem::create_directories(out_dir);
  const UnitAmplitudes unit = unit_amplitudes(f.sweep.params, f.sweep.xi_grid());
  const auto lines = rows_for_couplings(unit, f.sweep.couplings);
  const auto surface = rows_for_couplings(unit, surface_couplings(f));

  std::vector<std::filesystem::path> written = {out_dir / "fig1.csv", out_dir / "fig4.csv", out_dir / "fig5.csv"};
  write_csv_file(written[0], lines, {"xi", "K", "sqrtD", "negativity", "conn_corr"});
  write_csv_file(written[1], surface, {"xi", "K", "conn_corr", "sqrtD", "negativity"});
  write_csv_file(written[2], lines, {"xi", "K", "bell_chsh", "bell_opt"}, {{"bell_classical", kClassicalBellBound}});
  return written;
}

}  // namespace fermicorr
