#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <fmt/core.h>

#include "iselect/diamond.hpp"
#include "iselect/errors.hpp"
#include "iselect/hydrogen.hpp"
#include "iselect/serialization.hpp"
#include "iselect/subrecoil.hpp"
#include "iselect/two_mode.hpp"
#include "iselect/velocity.hpp"
#include "output.hpp"

namespace iselect::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kFormatVersion = "1";

struct Loaded {
  json config = json::object();
  fs::path base_dir;  ///< relative input paths resolve against this
};

Loaded load(const Invocation& inv) {
  Loaded l;
  if (inv.config_path) {
    l.config = read_json_file(*inv.config_path, "--config");
    if (!l.config.is_object()) throw ConfigError("--config", "config root must be a JSON object");
    l.base_dir = fs::path(*inv.config_path).parent_path();
  }
  const JsonObject root(l.config, "");
  const std::string version = root.string("format_version", kFormatVersion);
  if (version != kFormatVersion) {
    throw ConfigError("format_version", fmt::format("unsupported format_version '{}' (expected \"1\")", version));
  }
  if (root.has("subcommand") && root.string("subcommand") != inv.subcommand) {
    throw ConfigError("subcommand", fmt::format("config is for '{}', not '{}'", root.string("subcommand"), inv.subcommand));
  }
  return l;
}

std::uint64_t resolve_seed(const Invocation& inv, const JsonObject& root, std::uint64_t section_seed = 0) {
  if (inv.seed) return *inv.seed;
  return root.unsigned_integer("seed", section_seed);
}

std::string resolve_out(const Invocation& inv, const JsonObject& root, const std::string& fallback) {
  std::string out = inv.out ? *inv.out : root.string("out", fallback);
  while (out.size() > 1 && out.back() == '/') out.pop_back();
  if (out.empty()) throw ConfigError("out", "output path must not be empty");
  return out;
}

json meta_header(const Invocation& inv, std::uint64_t seed, const std::string& out) {
  return json{{"format_version", kFormatVersion}, {"subcommand", inv.subcommand}, {"seed", seed}, {"out", out}};
}

void write_meta(const std::string& out, const json& meta) { write_atomic(out + ".meta.json", meta.dump(2) + "\n"); }

/// Runs a core validate() and reports its failure against `key`.
template <class F>
void checked(const std::string& key, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, fmt::format("key '{}': {}", key, e.what()));
  }
}

double non_negative(const JsonObject& o, std::string_view key, double fallback) {
  const double x = o.number(key, fallback);
  if (x < 0.0) throw ConfigError(o.qualified(key), fmt::format("key '{}' must be non-negative", o.qualified(key)));
  return x;
}

DiamondParams read_diamond(const JsonObject& root) {
  DiamondParams d = diamond_from_json(root.raw("diamond"), "diamond");
  checked("diamond", [&] { d.validate(); });
  return d;
}

double parse_cell(const std::string& cell, const std::string& key) {
  if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t used = 0;
    const double x = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key, fmt::format("CSV referenced by '{}' has a non-numeric cell '{}'", key, cell));
  }
}

}  // namespace

Outcome run_two_mode(const Invocation& inv) {
  const Loaded l = load(inv);
  const JsonObject root(l.config, "");
  root.only({"format_version", "subcommand", "seed", "out", "diamond", "nbar1", "nbar2", "nmax1", "nmax2", "gamma0",
             "time_grid"});
  const DiamondParams d = read_diamond(root);
  CoherenceRun run;
  run.nbar1 = non_negative(root, "nbar1", run.nbar1);
  run.nbar2 = non_negative(root, "nbar2", run.nbar2);
  run.nmax1 = root.unsigned_integer("nmax1", truncation_bound(run.nbar1));
  run.nmax2 = root.unsigned_integer("nmax2", truncation_bound(run.nbar2));
  if (root.has("gamma0")) {
    run.gamma0 = root.number("gamma0");
    if (!(*run.gamma0 > 0.0)) throw ConfigError("gamma0", "key 'gamma0' must be positive");
  } else {
    run.gamma0 = reference_rate(d, run.nbar1);
  }

  const json empty = json::object();
  const JsonObject grid(root.has("time_grid") ? root.raw("time_grid") : empty, "time_grid");
  grid.only({"min", "max", "points", "spacing"});
  const double t_min = grid.number("min", 1e-2);
  const double t_max = grid.number("max", 1e2);
  const std::uint64_t points = grid.unsigned_integer("points", 64);
  const std::string spacing = grid.string("spacing", "log");
  if (spacing != "log" && spacing != "linear") {
    throw ConfigError("time_grid.spacing", "key 'time_grid.spacing' must be log or linear");
  }
  if (points < 1) throw ConfigError("time_grid.points", "key 'time_grid.points' must be >= 1");
  if (!(t_max >= t_min) || !(spacing == "linear" ? t_min >= 0.0 : t_min > 0.0)) {
    throw ConfigError("time_grid.min", "key 'time_grid' needs 0 < min <= max (0 <= min for linear spacing)");
  }
  run.gamma0_times = spacing == "log" ? log_spaced(t_min, t_max, points) : lin_spaced(t_min, t_max, points);

  const std::uint64_t seed = resolve_seed(inv, root);
  const std::string out = resolve_out(inv, root, "two_mode.csv");
  const auto samples = coherence_series(d, run);

  CsvBuilder csv({"gamma0_t", "R_dB", "ground_population"});
  for (const auto& s : samples) {
    csv.number(s.gamma0_t).number(s.r_db).number(s.ground_population).end_row();
  }
  write_atomic(out, csv.text());

  json meta = meta_header(inv, seed, out);
  meta["diamond"] = to_json(d);
  meta["nbar1"] = run.nbar1;
  meta["nbar2"] = run.nbar2;
  meta["nmax1"] = *run.nmax1;
  meta["nmax2"] = *run.nmax2;
  meta["gamma0"] = *run.gamma0;
  meta["time_grid"] = json{{"min", t_min}, {"max", t_max}, {"points", points}, {"spacing", spacing}};
  write_meta(out, meta);

  return {out, csv.rows(), fmt::format("final R = {:.3f} dB", samples.back().r_db)};
}

Outcome run_velocity_select(const Invocation& inv) {
  const Loaded l = load(inv);
  const JsonObject root(l.config, "");
  root.only({"format_version", "subcommand", "seed", "out", "diamond", "ensemble", "n1", "n2", "t_final"});
  const DiamondParams d = read_diamond(root);
  const JsonObject ens = root.object("ensemble");
  ens.only({"v_min", "v_max", "points", "mean", "sigma"});
  const double v_min = ens.number("v_min");
  const double v_max = ens.number("v_max");
  const std::uint64_t points = ens.unsigned_integer("points", 401);
  const double mean = ens.number("mean", 0.0);
  const double sigma = ens.number("sigma", 1.0);
  if (!(v_max > v_min)) throw ConfigError("ensemble.v_max", "key 'ensemble.v_max' must exceed v_min");
  if (points < 2) throw ConfigError("ensemble.points", "key 'ensemble.points' must be >= 2");
  if (!(sigma > 0.0)) throw ConfigError("ensemble.sigma", "key 'ensemble.sigma' must be positive");
  const double n1 = non_negative(root, "n1", 0.0);
  const double n2 = non_negative(root, "n2", 0.0);
  if (!root.has("t_final")) throw ConfigError("t_final", "missing key 't_final'");
  const double t_final = non_negative(root, "t_final", 0.0);

  const std::uint64_t seed = resolve_seed(inv, root);
  const std::string out = resolve_out(inv, root, "velocity_select.csv");

  const VelocityEnsemble e0 = gaussian_ensemble(v_min, v_max, points, mean, sigma);
  const VelocityEnsemble ef = filter_evolve(e0, d, n1, n2, t_final);
  CsvBuilder csv({"v", "weight_t0", "weight_tf"});
  for (std::size_t i = 0; i < e0.velocities.size(); ++i) {
    csv.number(e0.velocities[i]).number(e0.weights[i]).number(ef.weights[i]).end_row();
  }
  write_atomic(out, csv.text());

  json meta = meta_header(inv, seed, out);
  meta["diamond"] = to_json(d);
  meta["ensemble"] = json{{"v_min", v_min}, {"v_max", v_max}, {"points", points}, {"mean", mean}, {"sigma", sigma}};
  meta["n1"] = n1;
  meta["n2"] = n2;
  meta["t_final"] = t_final;
  write_meta(out, meta);

  std::string note;
  try {
    note = fmt::format("v* = {:.6g}, surviving weight {:.6g}", selected_velocity(d, n1, n2), ef.total_weight());
  } catch (const NoSelection&) {
    note = fmt::format("no selected velocity, surviving weight {:.6g}", ef.total_weight());
  }
  return {out, csv.rows(), note};
}

Outcome run_cool_compete(const Invocation& inv) {
  const Loaded l = load(inv);
  const JsonObject root(l.config, "");
  root.only({"format_version", "subcommand", "seed", "out", "competition", "g_values"});
  CompetitionParams c = competition_from_json(root.has("competition") ? root.raw("competition") : json::object());
  c.seed = resolve_seed(inv, root, c.seed);
  std::vector<double> g_values{0.0, 0.1, 1.0, 10.0};
  if (root.has("g_values")) {
    const json& g = root.raw("g_values");
    if (!g.is_array() || g.empty()) throw ConfigError("g_values", "key 'g_values' must be a non-empty array");
    g_values.clear();
    for (const auto& x : g) {
      if (!x.is_number() || x.get<double>() < 0.0) {
        throw ConfigError("g_values", "key 'g_values' must hold non-negative numbers");
      }
      g_values.push_back(x.get<double>());
    }
  }
  const std::string out = resolve_out(inv, root, "cool_compete.csv");

  CsvBuilder csv({"g", "T_over_TD", "surviving_fraction"});
  std::vector<CompetitionResult> results;
  for (double g : g_values) {
    CompetitionParams cg = c;
    cg.g = g;
    checked("competition", [&] { cg.validate(); });
    results.push_back(competition_mc(cg));
    csv.number(g).number(results.back().temperature_ratio).number(results.back().surviving_fraction).end_row();
  }
  write_atomic(out, csv.text());

  json meta = meta_header(inv, c.seed, out);
  meta["competition"] = to_json(c);
  meta["g_values"] = g_values;
  write_meta(out, meta);

  return {out, csv.rows(),
          fmt::format("T/T_D {:.4g} -> {:.4g}", results.front().temperature_ratio, results.back().temperature_ratio)};
}

Outcome run_hydrogen_scan(const Invocation& inv) {
  const Loaded l = load(inv);
  const JsonObject root(l.config, "");
  root.only({"format_version", "subcommand", "seed", "out", "qmin", "qmax", "steps", "nmax", "pole_guard", "q0"});
  const double qmin = inv.qmin ? *inv.qmin : root.number("qmin", 1.5);
  const double qmax = inv.qmax ? *inv.qmax : root.number("qmax", 11.5);
  const std::uint64_t steps = inv.steps ? *inv.steps : root.unsigned_integer("steps", 10001);
  json hj = json::object();
  hj["n_max"] = inv.nmax ? *inv.nmax : root.unsigned_integer("nmax", 100);
  if (hj["n_max"].get<std::uint64_t>() < 2 || hj["n_max"].get<std::uint64_t>() > 100000) {
    throw ConfigError("nmax", "--nmax must lie in [2, 100000]");
  }
  if (root.has("pole_guard")) hj["pole_guard"] = root.number("pole_guard");
  if (root.has("q0")) hj["q0"] = root.number("q0");
  const HydrogenRamanParams h = hydrogen_from_json(hj, "");
  if (!(qmin > 1.0)) throw ConfigError("qmin", "--qmin must exceed 1");
  if (!(qmax > qmin)) throw ConfigError("qmax", "--qmax must exceed --qmin");
  if (steps < 2 || steps > 100000000) throw ConfigError("steps", "--steps must lie in [2, 1e8]");

  const std::uint64_t seed = resolve_seed(inv, root);
  const std::string out = resolve_out(inv, root, "hydrogen_scan.csv");
  const RamanSpectrum spec = scan_spectrum(qmin, qmax, steps, h);

  CsvBuilder csv({"q", "S", "Q", "resonance"});
  std::size_t guarded = 0;
  for (std::size_t i = 0; i < spec.q_values.size(); ++i) {
    csv.number(spec.q_values[i]);
    if (spec.resonance[i]) {
      csv.empty().empty().integer(1);
      ++guarded;
    } else {
      csv.number(spec.amplitudes[i]).number(spec.rates[i]).integer(0);
    }
    csv.end_row();
  }
  write_atomic(out, csv.text());

  json meta = meta_header(inv, seed, out);
  meta["qmin"] = qmin;
  meta["qmax"] = qmax;
  meta["steps"] = steps;
  meta["nmax"] = h.n_max;
  meta["pole_guard"] = h.pole_guard;
  meta["q0"] = h.q0;
  write_meta(out, meta);

  return {out, csv.rows(), fmt::format("{} guarded points", guarded)};
}

Outcome run_antiresonance(const Invocation& inv) {
  const Loaded l = load(inv);
  const JsonObject root(l.config, "");
  root.only({"format_version", "subcommand", "seed", "out", "between", "nmax", "pole_guard"});
  if (!inv.between && !root.has("between")) throw ConfigError("between", "missing --between");
  const std::uint64_t between = inv.between ? *inv.between : root.unsigned_integer("between");
  if (between < 2 || between > 100000) throw ConfigError("between", "--between must lie in [2, 100000]");
  json hj = json::object();
  hj["n_max"] = inv.nmax ? *inv.nmax : root.unsigned_integer("nmax", 100);
  if (hj["n_max"].get<std::uint64_t>() < 2 || hj["n_max"].get<std::uint64_t>() > 100000) {
    throw ConfigError("nmax", "--nmax must lie in [2, 100000]");
  }
  if (root.has("pole_guard")) hj["pole_guard"] = root.number("pole_guard");
  const HydrogenRamanParams h = hydrogen_from_json(hj, "");

  const std::uint64_t seed = resolve_seed(inv, root);
  const std::string out = resolve_out(inv, root, "antiresonance.csv");
  const double q_star = find_antiresonance(static_cast<int>(between), h);

  CsvBuilder csv({"n_low", "q_star"});
  csv.integer(static_cast<long long>(between)).number(q_star).end_row();
  write_atomic(out, csv.text());

  json meta = meta_header(inv, seed, out);
  meta["between"] = between;
  meta["nmax"] = h.n_max;
  meta["pole_guard"] = h.pole_guard;
  write_meta(out, meta);

  return {out, csv.rows(), fmt::format("q* = {:.12f}", q_star)};
}

Outcome run_cool_mc(const Invocation& inv) {
  const Loaded l = load(inv);
  const JsonObject root(l.config, "");
  root.only({"format_version", "subcommand", "seed", "out", "subrecoil", "v_init", "v_trap", "samples", "bins",
             "record_index", "rate_table"});
  const json empty = json::object();
  const json& sub = root.has("subrecoil") ? root.raw("subrecoil") : empty;
  SubrecoilParams p = subrecoil_from_json(sub);
  p.seed = resolve_seed(inv, root, p.seed);
  const InitialVelocity init = initial_velocity_from_json(root.has("v_init") ? root.raw("v_init") : empty);

  SummaryOptions opts;
  opts.v_trap = root.number("v_trap", p.v_r);
  if (!(opts.v_trap > 0.0)) throw ConfigError("v_trap", "key 'v_trap' must be positive");
  opts.n_samples = root.unsigned_integer("samples", opts.n_samples);
  if (opts.n_samples < 2) throw ConfigError("samples", "key 'samples' must be >= 2");
  const std::uint64_t bins = root.unsigned_integer("bins", 10);
  if (bins < 10 || bins > opts.n_samples) throw ConfigError("bins", "key 'bins' must lie in [10, samples]");
  const std::uint64_t record_index = root.unsigned_integer("record_index", 0);

  json table_meta;
  if (root.has("rate_table")) {
    const JsonObject t = root.object("rate_table");
    t.only({"path", "q_star", "k_eff", "omega_scale", "v_recoil_mps"});
    if (sub.contains("rate_law") && p.law != RateLaw::sampled) {
      throw ConfigError("subrecoil.rate_law", "key 'rate_table' needs subrecoil.rate_law = sampled");
    }
    p.law = RateLaw::sampled;
    fs::path path = t.string("path");
    if (path.is_relative()) path = l.base_dir / path;
    path = fs::absolute(path).lexically_normal();
    const CsvTable csv = read_csv(path, "rate_table.path");
    const std::size_t qc = csv.column("q", "rate_table.path");
    const std::size_t sc = csv.column("S", "rate_table.path");
    std::vector<double> q;
    std::vector<double> s;
    for (const auto& row : csv.rows) {
      q.push_back(parse_cell(row[qc], "rate_table.path"));
      s.push_back(parse_cell(row[sc], "rate_table.path"));
    }
    double q_star = 0.0;
    if (t.has("q_star")) {
      q_star = t.number("q_star");
    } else {
      for (std::size_t i = 1; i < q.size() && q_star == 0.0; ++i) {
        if (std::isfinite(s[i - 1]) && std::isfinite(s[i]) && (s[i - 1] < 0.0) != (s[i] < 0.0)) {
          q_star = q[i - 1] + (q[i] - q[i - 1]) * s[i - 1] / (s[i - 1] - s[i]);
        }
      }
      if (q_star == 0.0) {
        throw ConfigError("rate_table.q_star", "rate table has no sign change of S; set 'rate_table.q_star'");
      }
    }
    if (!(q_star > 1.0)) throw ConfigError("rate_table.q_star", "key 'rate_table.q_star' must exceed 1");
    const double omega_scale = t.number("omega_scale", kRydbergAngularFrequency);
    const double k_eff = t.number("k_eff", 2.0 * omega_scale / (q_star * q_star) / kSpeedOfLight);
    const double v_recoil = t.number("v_recoil_mps", kHbar * k_eff / kHydrogenMass);
    checked("rate_table", [&] { p.table = SampledRate::from_spectrum(q, s, q_star, k_eff, omega_scale, v_recoil); });
    table_meta = json{{"path", path.string()},
                      {"q_star", q_star},
                      {"k_eff", k_eff},
                      {"omega_scale", omega_scale},
                      {"v_recoil_mps", v_recoil}};
  } else if (p.law == RateLaw::sampled) {
    throw ConfigError("rate_table", "subrecoil.rate_law = sampled needs 'rate_table'");
  }
  checked("subrecoil", [&] { p.validate(); });
  if (p.n_traj < 1000) throw ConfigError("subrecoil.n_traj", "key 'subrecoil.n_traj' must be >= 1000 for statistics");
  if (p.t_total * p.rate_at_recoil < 100.0) {
    throw ConfigError("subrecoil.t_total", "key 'subrecoil.t_total' must be >= 100 / rate_at_recoil");
  }
  if (record_index >= p.n_traj) throw ConfigError("record_index", "key 'record_index' must be below subrecoil.n_traj");

  const std::string out = resolve_out(inv, root, "cool_mc");
  const auto summaries = simulate_ensemble(p, init, opts);
  const TrappingStatistics stats = trapping_statistics(summaries, p, opts);
  const GrowthReport growth = trapped_fraction_growth(stats.trapped, summaries.size(), bins);
  const Trajectory traj = ensemble_member(p, init, record_index);

  CsvBuilder tcsv({"omega0_t", "v_over_vr"});
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    tcsv.number(traj.times[i] * p.rate_at_recoil).number(traj.velocities[i] / p.v_r).end_row();
  }
  tcsv.number(traj.t_total * p.rate_at_recoil).number(traj.velocities.back() / p.v_r).end_row();

  CsvBuilder scsv({"tail_exponent", "longest_fraction", "omega0_t", "trapped_fraction", "trapped_error"});
  for (std::size_t i = 0; i < growth.bin_times.size(); ++i) {
    scsv.number(stats.tail_exponent)
        .number(stats.longest_fraction)
        .number(growth.bin_times[i] * p.rate_at_recoil)
        .number(growth.fraction[i])
        .number(growth.error[i])
        .end_row();
  }

  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError(fmt::format("cannot create output directory '{}': {}", out, ec.message()));
  write_atomic(fs::path(out) / "trajectory.csv", tcsv.text());
  write_atomic(fs::path(out) / "stats.csv", scsv.text());

  json meta = meta_header(inv, p.seed, out);
  meta["subrecoil"] = to_json(p);
  meta["v_init"] = to_json(init);
  meta["v_trap"] = opts.v_trap;
  meta["samples"] = opts.n_samples;
  meta["bins"] = bins;
  meta["record_index"] = record_index;
  if (!table_meta.is_null()) meta["rate_table"] = table_meta;
  write_meta(out, meta);

  return {out, tcsv.rows() + scsv.rows(),
          fmt::format("tail exponent {:.4g}, longest fraction {:.4g}, trapped fraction growth {}",
                      stats.tail_exponent, stats.longest_fraction,
                      growth.non_decreasing ? "non-decreasing" : "NOT non-decreasing")};
}

}  // namespace iselect::cli
