#include <gtest/gtest.h>

#include <filesystem>

#include "uwbsim/errors.hpp"
#include "uwbsim/scenario.hpp"

using namespace uwbsim;

TEST(Scenario, ParsesEveryKey) {
  const auto s = parse_scenario(R"(# comment
name = demo
mode = cross-layer
channel_model = CM3
user = hard 480 weight=0.5   # trailing comment
user = soft 53.3
k = 3
w_mac = 2
w_phy = 0.5
normalization = raw-db
snr_start = -2
snr_stop = 4
snr_step = 0.5
noiseless = true
realizations = 7
min_errors = 11
max_bits = 1234
frames_per_superframe = 4
superframes_per_realization = 3
bp_mas = 16
include_shadowing = yes
seed = 99
baseline = tfc
baseline_mcs = 200
tfc_pattern = 1,1,2
ratios = 0, 1, 2.5
lambda.480 = 2.75
)");
  EXPECT_EQ(s.name, "demo");
  EXPECT_EQ(s.channel_model, ChannelModelId::CM3);
  ASSERT_EQ(s.users.size(), 2U);
  EXPECT_EQ(s.users[0].qos, QosClass::Hard);
  EXPECT_EQ(s.users[0].weight, 0.5);
  EXPECT_EQ(s.users[1].mcs, "53.3");
  EXPECT_EQ(s.k, 3.0);
  EXPECT_EQ(s.normalization, AlNormalization::RawDb);
  EXPECT_EQ(s.snr_grid().size(), 13U);
  EXPECT_TRUE(s.noiseless);
  EXPECT_EQ(s.max_bits, 1234U);
  EXPECT_EQ(s.beacon_mas, 16);
  EXPECT_TRUE(s.include_shadowing);
  EXPECT_TRUE(s.tfc_baseline);
  EXPECT_EQ(s.tfc_pattern, (std::vector<int>{1, 1, 2}));
  EXPECT_EQ(s.balance_ratios, (std::vector<double>{0, 1, 2.5}));
  EXPECT_EQ(s.lambda_overrides.at("480"), 2.75);
  EXPECT_EQ(parse_scenario(s.to_text()).to_text(), s.to_text());
  EXPECT_EQ(parse_scenario(s.to_text()).hash(), s.hash());
}

TEST(Scenario, ReportsAllProblemsWithLines) {
  try {
    parse_scenario("name = x\nbogus = 1\nuser = medium 320\nsnr_step = abc\n");
    FAIL() << "expected ScenarioError";
  } catch (const ScenarioError& e) {
    ASSERT_EQ(e.problems().size(), 3U);
    EXPECT_EQ(e.problems()[0].rfind("line 2:", 0), 0U);
    EXPECT_EQ(e.problems()[1].rfind("line 3:", 0), 0U);
    EXPECT_EQ(e.problems()[2].rfind("line 4:", 0), 0U);
  }
}

TEST(Scenario, ValidationErrors) {
  EXPECT_THROW(parse_scenario("name = x\n"), ScenarioError);
  EXPECT_THROW(parse_scenario("user = soft 999\n"), ScenarioError);
  EXPECT_THROW(parse_scenario("user = soft 320\nsnr_step = 0\n"), ScenarioError);
  EXPECT_THROW(parse_scenario("user = soft 320\nk = 1\n"), ScenarioError);
  EXPECT_THROW(parse_scenario("user = soft 320\nw_mac = 0\nw_phy = 0\n"), ScenarioError);
  EXPECT_THROW(parse_scenario("user = soft 320\nframes_per_superframe = 3\n"), ScenarioError);
  EXPECT_THROW(parse_scenario("user = soft 320\nbp_mas = 256\n"), ScenarioError);
  EXPECT_THROW(parse_scenario("user = soft 320\ntfc_pattern = 1,4\n"), ScenarioError);
  EXPECT_THROW(parse_scenario("user = soft 320\nlambda.320 = -1\n"), ScenarioError);
  EXPECT_THROW(load_scenario("/nonexistent/file.scn"), ScenarioError);
}

TEST(Scenario, SnrGridIncludesStop) {
  Scenario s;
  s.snr_start_db = 2;
  s.snr_stop_db = 16;
  s.snr_step_db = 1;
  const auto g = s.snr_grid();
  ASSERT_EQ(g.size(), 15U);
  EXPECT_EQ(g.front(), 2.0);
  EXPECT_EQ(g.back(), 16.0);
  s.snr_step_db = 0.1;
  s.snr_start_db = 0;
  s.snr_stop_db = 1;
  EXPECT_EQ(s.snr_grid().size(), 11U);
}

TEST(Scenario, ProfilesResolveWeights) {
  const auto p = preset("fig5").profiles();
  ASSERT_EQ(p.size(), 3U);
  EXPECT_EQ(p[0].id, 1U);
  // default k for one hard and two soft users is 3
  EXPECT_NEAR(p[0].weight, 0.6, 1e-12);
  EXPECT_NEAR(p[1].weight, 0.2, 1e-12);
  const auto q = preset("fig7").profiles();
  EXPECT_GT(q[0].weight, q[1].weight);
  EXPECT_GT(q[1].weight, q[2].weight);
  EXPECT_EQ(q[2].weight, q[3].weight);
}

TEST(Scenario, PresetsMatchFiles) {
  for (const auto& name : preset_names()) {
    const auto file = std::filesystem::path(UWBSIM_SCENARIO_DIR) / (name + ".scn");
    EXPECT_EQ(load_scenario(file).to_text(), preset(name).to_text()) << name;
  }
  EXPECT_THROW(preset("fig9"), ConfigError);
}

TEST(Scenario, PresetShapes) {
  const auto f5 = preset("fig5");
  EXPECT_EQ(f5.snr_start_db, 8.0);
  EXPECT_EQ(f5.snr_stop_db, 20.0);
  EXPECT_GE(f5.min_errors, 300U);
  EXPECT_EQ(f5.users.size(), 3U);
  EXPECT_TRUE(preset("fig6").tfc_baseline);
  EXPECT_EQ(preset("fig8").balance_ratios, (std::vector<double>{0, 0.25, 0.5, 1, 2, 4, 10}));
}
