// fermicorr: sweeps, state dumps, oracle cross-checks and figure data for the
// two-qubit Fermi problem.
//
// Exit codes: 0 success, 1 validation or usage error, 2 out of regime,
// 3 oracle tolerance breach.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fermicorr/sweep.hpp"

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kRegime = 2, kOracle = 3 };

struct Options {
  fermicorr::ModelParams params{};
  std::vector<double> couplings;
  double xi_min = 0.0;
  double xi_max = 2.0;
  int xi_steps = 401;
  double xi = 1.0;
  int count = 100;
  std::uint64_t seed = 7;
  fermicorr::oracles::DirectionGrid grid{};
  bool amplitudes_only = false;
  std::string out;
};

void add_model_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--r-bar", o.params.r_bar, "Omega r / v")->capture_default_str();
  cmd->add_option("--cutoff", o.params.cutoff, "UV cutoff omega_c / Omega (>= 10)")->capture_default_str();
  cmd->add_option("--quad-points", o.params.quad_points, "time-integral resolution (quad_points / 8 nodes per graded panel)")->capture_default_str();
  cmd->add_flag("--two-photon,!--no-two-photon", o.params.include_two_photon,
                "include the two-photon population |G|^2 (default on)");
}

void add_sweep_flags(CLI::App* cmd, Options& o) {
  add_model_flags(cmd, o);
  cmd->add_option("--coupling", o.couplings, "coupling K, repeatable (default 0.02 0.05 0.08)");
  cmd->add_option("--xi-min", o.xi_min, "first xi")->capture_default_str();
  cmd->add_option("--xi-max", o.xi_max, "last xi")->capture_default_str();
  cmd->add_option("--xi-steps", o.xi_steps, "grid points, endpoints included")->capture_default_str();
}

fermicorr::SweepSpec sweep_spec(const Options& o) {
  fermicorr::SweepSpec s;
  s.xi_min = o.xi_min;
  s.xi_max = o.xi_max;
  s.xi_steps = o.xi_steps;
  if (!o.couplings.empty()) s.couplings = o.couplings;
  s.params = o.params;
  s.output_path = o.out;
  return s;
}

void with_output(const std::string& path, const auto& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write(f);
  if (!f) throw std::runtime_error("write failed: " + path);
}

int run_sweep_cmd(const Options& o) {
  const auto rows = fermicorr::run_sweep(sweep_spec(o));
  const auto names = o.amplitudes_only ? fermicorr::kAmplitudeColumns : fermicorr::all_column_names();
  with_output(o.out, [&](std::ostream& os) { fermicorr::write_csv(os, rows, names); });
  return kOk;
}

int run_state_cmd(const Options& o) {
  fermicorr::ModelParams p = o.params;
  if (o.couplings.size() > 1) throw fermicorr::ValidationError("state takes a single --coupling");
  if (!o.couplings.empty()) p.coupling = o.couplings.front();
  const auto doc = fermicorr::state_dump(p, o.xi);
  with_output(o.out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  return kOk;
}

int run_oracle_cmd(const Options& o) {
  const auto rep = fermicorr::oracle_check(o.count, o.seed, o.grid);
  with_output(o.out, [&](std::ostream& os) { fermicorr::print_report(os, rep); });
  return rep.passed() ? kOk : kOracle;
}

int run_figures_cmd(const Options& o) {
  fermicorr::FigureSpec f;
  f.sweep = sweep_spec(o);
  const auto files = fermicorr::figures(o.out.empty() ? std::filesystem::path(".") : std::filesystem::path(o.out), f);
  for (const auto& path : files) std::cerr << "wrote " << path.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation measures of the second-order two-qubit Fermi-problem state"};
  app.require_subcommand(1);
  Options o;

  auto* sweep = app.add_subcommand("sweep", "CSV of all measures over a (K, xi) grid");
  add_sweep_flags(sweep, o);
  sweep->add_flag("--amplitudes-only", o.amplitudes_only, "emit only the amplitude columns");
  sweep->add_option("--out", o.out, "output CSV (default stdout)");

  auto* state = app.add_subcommand("state", "JSON dump of the assembled state at one xi");
  add_model_flags(state, o);
  state->add_option("--coupling", o.couplings, "coupling K (default 0.1)");
  state->add_option("--xi", o.xi, "xi = v t / r")->capture_default_str();
  state->add_option("--out", o.out, "output JSON (default stdout)");

  auto* oracle = app.add_subcommand("oracle-check", "brute-force oracles against the closed forms");
  oracle->add_option("--count", o.count, "random states per kind")->capture_default_str();
  oracle->add_option("--seed", o.seed, "first state seed")->capture_default_str();
  oracle->add_option("--polar", o.grid.polar_steps, "polar grid divisions")->capture_default_str();
  oracle->add_option("--azimuth", o.grid.azimuth_steps, "azimuthal grid divisions")->capture_default_str();
  oracle->add_option("--refine-rounds", o.grid.refine_rounds, "local zoom rounds")->capture_default_str();
  oracle->add_option("--out", o.out, "report file (default stdout)");

  auto* figs = app.add_subcommand("figures", "fig1.csv, fig4.csv and fig5.csv");
  add_sweep_flags(figs, o);
  figs->add_option("--out", o.out, "output directory (default .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*sweep) return run_sweep_cmd(o);
    if (*state) return run_state_cmd(o);
    if (*oracle) return run_oracle_cmd(o);
    if (*figs) return run_figures_cmd(o);
  } catch (const fermicorr::OutOfRegimeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRegime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
