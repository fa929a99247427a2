#include "iselect/serialization.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace iselect {

using nlohmann::json;

JsonObject::JsonObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
  if (!j_.is_object()) throw ConfigError(path_, fmt::format("'{}' must be a JSON object", path_));
}

std::string JsonObject::qualified(std::string_view key) const {
  return path_.empty() ? std::string(key) : fmt::format("{}.{}", path_, key);
}

bool JsonObject::has(std::string_view key) const { return j_.contains(key); }

const json& JsonObject::raw(std::string_view key) const {
  const auto it = j_.find(key);
  if (it == j_.end()) throw ConfigError(qualified(key), fmt::format("missing key '{}'", qualified(key)));
  return *it;
}

double JsonObject::number(std::string_view key) const {
  const json& v = raw(key);
  if (!v.is_number()) throw ConfigError(qualified(key), fmt::format("key '{}' must be a number", qualified(key)));
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(qualified(key), fmt::format("key '{}' must be finite", qualified(key)));
  return x;
}

double JsonObject::number(std::string_view key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::uint64_t JsonObject::unsigned_integer(std::string_view key) const {
  const json& v = raw(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(qualified(key), fmt::format("key '{}' must be a non-negative integer", qualified(key)));
  }
  return v.get<std::uint64_t>();
}

std::uint64_t JsonObject::unsigned_integer(std::string_view key, std::uint64_t fallback) const {
  return has(key) ? unsigned_integer(key) : fallback;
}

std::string JsonObject::string(std::string_view key) const {
  const json& v = raw(key);
  if (!v.is_string()) throw ConfigError(qualified(key), fmt::format("key '{}' must be a string", qualified(key)));
  return v.get<std::string>();
}

std::string JsonObject::string(std::string_view key, std::string fallback) const {
  return has(key) ? string(key) : fallback;
}

JsonObject JsonObject::object(std::string_view key) const { return JsonObject(raw(key), qualified(key)); }

void JsonObject::only(std::initializer_list<std::string_view> allowed) const {
  for (const auto& [key, value] : j_.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(qualified(key), fmt::format("unknown key '{}'", qualified(key)));
    }
  }
}

json to_json(const DiamondParams& p) {
  return json{{"a1", p.a1},
              {"a2", p.a2},
              {"delta1", p.delta1},
              {"delta2", p.delta2},
              {"beta", {p.beta[0], p.beta[1], p.beta[2], p.beta[3]}},
              {"k", p.k},
              {"detuning_floor", p.detuning_floor}};
}

DiamondParams diamond_from_json(const json& j, const std::string& path) {
  const JsonObject o(j, path);
  o.only({"a1", "a2", "delta1", "delta2", "beta", "k", "detuning_floor"});
  DiamondParams p;
  p.a1 = o.number("a1");
  p.a2 = o.number("a2");
  p.delta1 = o.number("delta1");
  p.delta2 = o.number("delta2");
  if (o.has("beta")) {
    const json& beta = o.raw("beta");
    if (!beta.is_array() || beta.size() != 4) {
      throw ConfigError(o.qualified("beta"), fmt::format("key '{}' must be a 4-element array", o.qualified("beta")));
    }
    for (std::size_t i = 0; i < 4; ++i) {
      if (!beta[i].is_number()) {
        throw ConfigError(o.qualified("beta"), fmt::format("key '{}' must hold numbers", o.qualified("beta")));
      }
      p.beta[i] = beta[i].get<double>();
    }
  }
  p.k = o.number("k", 0.0);
  p.detuning_floor = o.number("detuning_floor", default_detuning_floor(p.delta1, p.delta2));
  if (!(p.detuning_floor > 0.0)) {
    throw ConfigError(o.qualified("detuning_floor"), fmt::format("key '{}' must be positive", o.qualified("detuning_floor")));
  }
  if (p.a1 == 0.0 && p.a2 == 0.0) {
    throw ConfigError(o.qualified("a1"), fmt::format("keys '{}' and '{}' cannot both be zero", o.qualified("a1"), o.qualified("a2")));
  }
  return p;
}

json to_json(const CompetitionParams& c) {
  return json{{"g", c.g},
              {"v_selected", c.v_selected},
              {"friction", c.friction},
              {"v_doppler", c.v_doppler},
              {"dt", c.dt},
              {"t_total", c.t_total},
              {"n_traj", c.n_traj},
              {"seed", c.seed},
              {"v_initial_offset", c.v_initial_offset},
              {"histogram_bins", c.histogram_bins}};
}

CompetitionParams competition_from_json(const json& j, const std::string& path) {
  const JsonObject o(j, path);
  o.only({"g", "v_selected", "friction", "v_doppler", "dt", "t_total", "n_traj", "seed", "v_initial_offset",
          "histogram_bins"});
  CompetitionParams c;
  c.g = o.number("g", c.g);
  c.v_selected = o.number("v_selected", c.v_selected);
  c.friction = o.number("friction", c.friction);
  c.v_doppler = o.number("v_doppler", c.v_doppler);
  c.dt = o.number("dt", c.dt);
  c.t_total = o.number("t_total", c.t_total);
  c.n_traj = o.unsigned_integer("n_traj", c.n_traj);
  c.seed = o.unsigned_integer("seed", c.seed);
  c.v_initial_offset = o.number("v_initial_offset", c.v_initial_offset);
  c.histogram_bins = o.unsigned_integer("histogram_bins", c.histogram_bins);
  return c;
}

json to_json(const HydrogenRamanParams& p) {
  return json{{"n_max", p.n_max}, {"q0", p.q0}, {"pole_guard", p.pole_guard}};
}

HydrogenRamanParams hydrogen_from_json(const json& j, const std::string& path) {
  const JsonObject o(j, path);
  o.only({"n_max", "q0", "pole_guard"});
  HydrogenRamanParams p;
  const auto n_max = o.unsigned_integer("n_max", static_cast<std::uint64_t>(p.n_max));
  if (n_max < 2 || n_max > 100000) {
    throw ConfigError(o.qualified("n_max"), fmt::format("key '{}' must lie in [2, 100000]", o.qualified("n_max")));
  }
  p.n_max = static_cast<int>(n_max);
  p.q0 = o.number("q0", p.q0);
  p.pole_guard = o.number("pole_guard", p.pole_guard);
  if (!(p.pole_guard > 0.0)) {
    throw ConfigError(o.qualified("pole_guard"), fmt::format("key '{}' must be positive", o.qualified("pole_guard")));
  }
  return p;
}

std::string_view to_string(RateLaw law) {
  switch (law) {
    case RateLaw::quadratic:
      return "quadratic";
    case RateLaw::constant:
      return "constant";
    case RateLaw::sampled:
      return "sampled";
  }
  return "quadratic";
}

json to_json(const SubrecoilParams& p) {
  return json{{"rate_at_recoil", p.rate_at_recoil},
              {"rate_cap", p.rate_cap},
              {"v_r", p.v_r},
              {"raman_kick", p.raman_kick},
              {"repump_recoils", p.repump_recoils},
              {"t_total", p.t_total},
              {"n_traj", p.n_traj},
              {"seed", p.seed},
              {"rate_law", std::string(to_string(p.law))}};
}

SubrecoilParams subrecoil_from_json(const json& j, const std::string& path) {
  const JsonObject o(j, path);
  o.only({"rate_at_recoil", "rate_cap", "v_r", "raman_kick", "repump_recoils", "t_total", "n_traj", "seed",
          "rate_law"});
  SubrecoilParams p;
  p.rate_at_recoil = o.number("rate_at_recoil", p.rate_at_recoil);
  p.rate_cap = o.number("rate_cap", p.rate_cap);
  p.v_r = o.number("v_r", p.v_r);
  p.raman_kick = o.number("raman_kick", 2.0 * p.v_r);
  p.repump_recoils = static_cast<int>(o.unsigned_integer("repump_recoils", 2));
  p.t_total = o.number("t_total", p.t_total);
  p.n_traj = o.unsigned_integer("n_traj", p.n_traj);
  p.seed = o.unsigned_integer("seed", p.seed);
  const std::string law = o.string("rate_law", "quadratic");
  if (law == "quadratic") {
    p.law = RateLaw::quadratic;
  } else if (law == "constant") {
    p.law = RateLaw::constant;
  } else if (law == "sampled") {
    p.law = RateLaw::sampled;
  } else {
    throw ConfigError(o.qualified("rate_law"),
                      fmt::format("key '{}' must be quadratic, constant or sampled", o.qualified("rate_law")));
  }
  for (auto [key, ok] : {std::pair{"rate_at_recoil", p.rate_at_recoil > 0.0}, std::pair{"v_r", p.v_r > 0.0},
                         std::pair{"t_total", p.t_total > 0.0}, std::pair{"rate_cap", p.rate_cap >= 0.0},
                         std::pair{"raman_kick", p.raman_kick >= 0.0}}) {
    if (!ok) throw ConfigError(o.qualified(key), fmt::format("key '{}' is out of range", o.qualified(key)));
  }
  return p;
}

json to_json(const InitialVelocity& v) {
  switch (v.kind) {
    case InitialVelocity::Kind::fixed:
      return json{{"kind", "fixed"}, {"value", v.a}};
    case InitialVelocity::Kind::uniform:
      return json{{"kind", "uniform"}, {"min", v.a}, {"max", v.b}};
    case InitialVelocity::Kind::gaussian:
      return json{{"kind", "gaussian"}, {"mean", v.a}, {"sigma", v.b}};
  }
  return json{};
}

InitialVelocity initial_velocity_from_json(const json& j, const std::string& path) {
  const JsonObject o(j, path);
  InitialVelocity v;
  const std::string kind = o.string("kind", "fixed");
  if (kind == "fixed") {
    o.only({"kind", "value"});
    v.kind = InitialVelocity::Kind::fixed;
    v.a = o.number("value", 4.0);
  } else if (kind == "uniform") {
    o.only({"kind", "min", "max"});
    v.kind = InitialVelocity::Kind::uniform;
    v.a = o.number("min");
    v.b = o.number("max");
    if (!(v.b > v.a)) throw ConfigError(o.qualified("max"), fmt::format("key '{}' must exceed min", o.qualified("max")));
  } else if (kind == "gaussian") {
    o.only({"kind", "mean", "sigma"});
    v.kind = InitialVelocity::Kind::gaussian;
    v.a = o.number("mean", 0.0);
    v.b = o.number("sigma");
    if (!(v.b > 0.0)) throw ConfigError(o.qualified("sigma"), fmt::format("key '{}' must be positive", o.qualified("sigma")));
  } else {
    throw ConfigError(o.qualified("kind"), fmt::format("key '{}' must be fixed, uniform or gaussian", o.qualified("kind")));
  }
  return v;
}

}  // namespace iselect
