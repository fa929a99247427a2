#include <gtest/gtest.h>

#include "iselect/serialization.hpp"

namespace iselect {
namespace {

using nlohmann::json;

TEST(DiamondJson, RoundTrip) {
  DiamondParams p;
  p.a1 = 0.3;
  p.a2 = -1.7;
  p.delta1 = -2.0;
  p.delta2 = 4.5;
  p.beta = {1e-4, 2e-5, 3e-5, 4e-4};
  p.k = 0.125;
  p.detuning_floor = 3e-9;
  const json j = json::parse(to_json(p).dump());
  const DiamondParams q = diamond_from_json(j);
  EXPECT_EQ(q.a1, p.a1);
  EXPECT_EQ(q.a2, p.a2);
  EXPECT_EQ(q.delta1, p.delta1);
  EXPECT_EQ(q.delta2, p.delta2);
  EXPECT_EQ(q.beta, p.beta);
  EXPECT_EQ(q.k, p.k);
  EXPECT_EQ(q.detuning_floor, p.detuning_floor);
  EXPECT_EQ(j.at("beta").size(), 4u);
}

TEST(DiamondJson, DefaultFloorFollowsDetunings) {
  const json j = {{"a1", 1.0}, {"a2", -1.0}, {"delta1", -30.0}, {"delta2", 5.0}};
  EXPECT_DOUBLE_EQ(diamond_from_json(j).detuning_floor, 3e-8);
}

TEST(DiamondJson, ErrorsNameTheKey) {
  const auto key_of = [](const json& j) {
    try {
      diamond_from_json(j);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("none");
  };
  EXPECT_EQ(key_of({{"a1", 1.0}, {"delta1", 1.0}, {"delta2", 1.0}}), "diamond.a2");
  EXPECT_EQ(key_of({{"a1", 1.0}, {"a2", 1.0}, {"delta1", 1.0}, {"delta2", "x"}}), "diamond.delta2");
  EXPECT_EQ(key_of({{"a1", 1.0}, {"a2", 1.0}, {"delta1", 1.0}, {"delta2", 1.0}, {"beta", {1, 2}}}), "diamond.beta");
  EXPECT_EQ(key_of({{"a1", 1.0}, {"a2", 1.0}, {"delta1", 1.0}, {"delta2", 1.0}, {"gamma", 1}}), "diamond.gamma");
  EXPECT_EQ(key_of({{"a1", 0.0}, {"a2", 0.0}, {"delta1", 1.0}, {"delta2", 1.0}}), "diamond.a1");
}

TEST(CompetitionJson, RoundTrip) {
  CompetitionParams c;
  c.g = 2.5;
  c.seed = 18446744073709551615ULL;
  c.n_traj = 12345;
  const CompetitionParams d = competition_from_json(json::parse(to_json(c).dump()));
  EXPECT_EQ(d.g, c.g);
  EXPECT_EQ(d.seed, c.seed);
  EXPECT_EQ(d.n_traj, c.n_traj);
  EXPECT_EQ(d.dt, c.dt);
}

TEST(SubrecoilJson, RoundTripAndLaw) {
  SubrecoilParams p;
  p.law = RateLaw::constant;
  p.rate_cap = 7.0;
  const SubrecoilParams q = subrecoil_from_json(json::parse(to_json(p).dump()));
  EXPECT_EQ(q.law, RateLaw::constant);
  EXPECT_EQ(q.rate_cap, 7.0);
  EXPECT_THROW(subrecoil_from_json(json{{"rate_law", "cubic"}}), ConfigError);
  EXPECT_THROW(subrecoil_from_json(json{{"v_r", -1.0}}), ConfigError);
}

TEST(InitialVelocityJson, Kinds) {
  const InitialVelocity u = initial_velocity_from_json(json{{"kind", "uniform"}, {"min", -2.0}, {"max", 3.0}});
  EXPECT_EQ(u.kind, InitialVelocity::Kind::uniform);
  EXPECT_EQ(initial_velocity_from_json(to_json(u)).b, 3.0);
  EXPECT_THROW(initial_velocity_from_json(json{{"kind", "gaussian"}, {"sigma", 0.0}}), ConfigError);
  EXPECT_THROW(initial_velocity_from_json(json{{"kind", "fixed"}, {"min", 1.0}}), ConfigError);
}

}  // namespace
}  // namespace iselect
