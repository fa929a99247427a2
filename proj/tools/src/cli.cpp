#include "iselect/cli.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"
#include "commands.hpp"
#include "iselect/errors.hpp"
#include "iselect/serialization.hpp"
#include "output.hpp"

namespace iselect::cli {
namespace {

void add_common(CLI::App& sub, Invocation& inv, bool config_required) {
  auto* config = sub.add_option("--config", inv.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  if (config_required) config->required();
  sub.add_option("--seed", inv.seed, "Master seed; overrides the config seed (default 0)");
  sub.add_option("--out", inv.out, "Output path; a directory for cool-mc");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interference-selective two-photon processes: coherence, velocity selection and Raman cooling",
               args.empty() ? "iselect" : args.front()};
  app.require_subcommand(1);
  app.footer("Exit status: 0 success, 1 I/O failure, 2 config error, 3 domain error.\n"
             "ISELECT_THREADS caps the worker count (0 or unset = all cores).\n"
             "Every run also writes <out>.meta.json, a complete config that reproduces the output.");

  Invocation inv;
  std::map<std::string, std::function<Outcome(const Invocation&)>> runners;

  auto* two_mode = app.add_subcommand("two-mode", "Two-mode coherence: CSV gamma0_t,R_dB,ground_population");
  add_common(*two_mode, inv, true);
  runners["two-mode"] = run_two_mode;

  auto* vsel = app.add_subcommand("velocity-select", "Velocity-selective filter: CSV v,weight_t0,weight_tf");
  add_common(*vsel, inv, true);
  runners["velocity-select"] = run_velocity_select;

  auto* compete = app.add_subcommand("cool-compete", "Selection vs Doppler cooling: CSV g,T_over_TD,surviving_fraction");
  add_common(*compete, inv, true);
  runners["cool-compete"] = run_cool_compete;

  auto* scan = app.add_subcommand("hydrogen-scan", "Hydrogen Raman spectrum: CSV q,S,Q,resonance");
  add_common(*scan, inv, false);
  scan->add_option("--qmin", inv.qmin, "Lowest q = sqrt(Ry/(hbar*omega1)) (default 1.5)");
  scan->add_option("--qmax", inv.qmax, "Highest q (default 11.5)");
  scan->add_option("--steps", inv.steps, "Number of equally spaced q points (default 10001)");
  scan->add_option("--nmax", inv.nmax, "Highest intermediate level n in the sum (default 100)");
  runners["hydrogen-scan"] = run_hydrogen_scan;

  auto* anti = app.add_subcommand("antiresonance", "Zero of the Raman amplitude between two poles: CSV n_low,q_star");
  add_common(*anti, inv, false);
  anti->add_option("--between", inv.between, "Lower pole n; the zero is searched in (n, n+1)");
  anti->add_option("--nmax", inv.nmax, "Highest intermediate level n in the sum (default 100)");
  runners["antiresonance"] = run_antiresonance;

  auto* mc = app.add_subcommand("cool-mc", "Subrecoil Raman cooling Monte Carlo: <out>/trajectory.csv, <out>/stats.csv");
  add_common(*mc, inv, true);
  runners["cool-mc"] = run_cool_mc;

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  inv.subcommand = chosen->get_name();
  const auto start = std::chrono::steady_clock::now();
  try {
    const Outcome o = runners.at(inv.subcommand)(inv);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fmt::print(err, "{}: wrote {} rows to {} in {:.2f} s; {}\n", inv.subcommand, o.rows, o.out, wall, o.note);
    return kExitOk;
  } catch (const ConfigError& e) {
    fmt::print(err, "{}: config error: {}\n", inv.subcommand, e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    fmt::print(err, "{}: {}: {}\n", inv.subcommand, e.name(), e.what());
    return kExitDomain;
  } catch (const IoError& e) {
    fmt::print(err, "{}: I/O error: {}\n", inv.subcommand, e.what());
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    fmt::print(err, "{}: I/O error: {}\n", inv.subcommand, e.what());
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "{}: config error: {}\n", inv.subcommand, e.what());
    return kExitConfig;
  }
}

}  // namespace iselect::cli
