#pragma once

// JSON forms of the parameter types. Readers reject unknown keys and report
// the dotted path of the offending key.

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "iselect/diamond.hpp"
#include "iselect/hydrogen.hpp"
#include "iselect/subrecoil.hpp"
#include "iselect/velocity.hpp"

namespace iselect {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what) : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Typed access to one JSON object with path-qualified error messages.
class JsonObject {
 public:
  JsonObject(const nlohmann::json& j, std::string path);

  bool has(std::string_view key) const;
  double number(std::string_view key) const;
  double number(std::string_view key, double fallback) const;
  std::uint64_t unsigned_integer(std::string_view key) const;
  std::uint64_t unsigned_integer(std::string_view key, std::uint64_t fallback) const;
  std::string string(std::string_view key) const;
  std::string string(std::string_view key, std::string fallback) const;
  const nlohmann::json& raw(std::string_view key) const;
  JsonObject object(std::string_view key) const;

  /// Throws ConfigError naming the first key not in `allowed`.
  void only(std::initializer_list<std::string_view> allowed) const;

  std::string qualified(std::string_view key) const;
  const std::string& path() const { return path_; }

 private:
  const nlohmann::json& j_;
  std::string path_;
};

/// Keys: a1, a2, delta1, delta2, beta (row-major 4-array), k, detuning_floor.
/// A missing detuning_floor takes default_detuning_floor(delta1, delta2).
nlohmann::json to_json(const DiamondParams& p);
DiamondParams diamond_from_json(const nlohmann::json& j, const std::string& path = "diamond");

nlohmann::json to_json(const CompetitionParams& c);
CompetitionParams competition_from_json(const nlohmann::json& j, const std::string& path = "competition");

nlohmann::json to_json(const HydrogenRamanParams& p);
HydrogenRamanParams hydrogen_from_json(const nlohmann::json& j, const std::string& path = "hydrogen");

/// The sampled rate table is not part of this form; callers attach it.
nlohmann::json to_json(const SubrecoilParams& p);
SubrecoilParams subrecoil_from_json(const nlohmann::json& j, const std::string& path = "subrecoil");

nlohmann::json to_json(const InitialVelocity& v);
InitialVelocity initial_velocity_from_json(const nlohmann::json& j, const std::string& path = "v_init");

std::string_view to_string(RateLaw law);

}  // namespace iselect
