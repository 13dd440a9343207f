// Copyright 2026 The effent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "effent/cli.hpp"
#include "effent/io.hpp"
#include "effent/random.hpp"

namespace effent {
namespace {

const std::string kSamples = EFFENT_SAMPLES_DIR;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "effent");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("effent_test_" + name);
  std::ofstream(path) << body;
  return path.string();
}

TEST(Json, MatrixRoundTrip) {
  Rng rng(1);
  const ComplexMatrix m = random_ginibre(3, 2, rng);
  const ComplexMatrix back = matrix_from_json(matrix_to_json(m));
  EXPECT_TRUE(approx_equal(back, m, 1e-11));
}

TEST(Json, StateRoundTripAndAmplitudes) {
  Rng rng(2);
  const DensityMatrix rho = random_density_matrix({2, 2}, rng);
  EXPECT_TRUE(approx_equal(state_from_json(state_to_json(rho)).matrix(), rho.matrix(), 1e-11));
  const DensityMatrix bell = state_from_json(Json::parse(R"({"dims":[2,2],"amplitudes":[0.7071067811865476,0,0,0.7071067811865476]})"));
  EXPECT_TRUE(approx_equal(bell.matrix(), max_entangled(2).projector(), 1e-12));
}

TEST(Json, ChannelRoundTrip) {
  const KrausChannel ch = channel_from_json(channel_to_json(amplitude_damping(0.3)));
  EXPECT_TRUE(approx_equal(effent::apply(ch, identity(2) / 2.0), effent::apply(amplitude_damping(0.3), identity(2) / 2.0), 1e-11));
}

TEST(Json, GameRoundTrip) {
  const GameSpec g = bell_statistics_game();
  const GameSpec back = game_from_json(game_to_json(g));
  EXPECT_EQ(back.n_x(), 2u);
  EXPECT_NEAR(back.payoff(3, 2, 1, 1), g.payoff(3, 2, 1, 1), 1e-10);
}

TEST(Json, ErrorsNameTheField) {
  try {
    matrix_from_json(Json::parse(R"({"rows":2,"cols":2})"));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("data"), std::string::npos);
  }
  EXPECT_THROW(state_from_json(Json::parse(R"({"dims":[2],"amplitudes":[1,1]})")), ValidationError);
  EXPECT_THROW(channel_from_json(Json::parse(R"({"kraus":[{"rows":1,"cols":1,"data":[0.5]}]})")), ValidationError);
}

TEST(ChannelSpec, NamedChannels) {
  EXPECT_TRUE(cli::parse_channel_spec("identity").is_identity_map());
  EXPECT_NEAR(quality_factor(cli::parse_channel_spec("amplitude-damping:0.36"), 2), 0.8, 1e-9);
  EXPECT_NEAR(quality_factor(cli::parse_channel_spec("phase-damping:0.19"), 2), 0.9, 1e-9);
  EXPECT_NEAR(quality_factor(cli::parse_channel_spec("ssr"), 2), 0.0, 1e-9);
  EXPECT_NEAR(quality_factor(cli::parse_channel_spec("bec:wrapped-normal:0,1.0,0.7854"), 2), std::exp(-0.5), 1e-9);
  EXPECT_NEAR(quality_factor(cli::parse_channel_spec("bec:uniform,1.2"), 2), 0.0, 1e-9);
  EXPECT_THROW(cli::parse_channel_spec("phase-damping:1.5"), ValidationError);
  EXPECT_THROW(cli::parse_channel_spec("warp-drive:1"), ValidationError);
  EXPECT_THROW(cli::parse_channel_spec("amplitude-damping:x"), ValidationError);
}

TEST(ChannelSpec, FileChannelMustBeTracePreserving) {
  const std::string good = temp_file("ad.json", channel_to_json(amplitude_damping(0.5)).dump());
  EXPECT_NEAR(quality_factor(cli::parse_channel_spec(good), 2), std::sqrt(0.5), 1e-9);
  const std::string bad = temp_file("half.json", R"({"kraus":[{"rows":2,"cols":2,"data":[0.5,0,0,0.5]}],"cptp":false})");
  EXPECT_THROW(cli::parse_channel_spec(bad), ValidationError);
  const std::string broken = temp_file("broken.json", "{not json");
  EXPECT_THROW(cli::parse_channel_spec(broken), ValidationError);
}

TEST(DistSpec, Variants) {
  EXPECT_NEAR(std::abs(g_factor(cli::parse_dist_spec("delta:0.3"))), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(g_factor(cli::parse_dist_spec("double-rect:0.5,0.3"))), (2 / 0.5) * std::sin(0.25) * std::cos(0.4), 1e-14);
  EXPECT_NEAR(std::abs(g_factor(cli::parse_dist_spec("delta-mixture:0,0.5,3.141592653589793,0.5"))), 0.0, 1e-15);
  EXPECT_THROW(cli::parse_dist_spec("wrapped-normal:1"), ValidationError);
  EXPECT_THROW(cli::parse_dist_spec("uniform:2"), ValidationError);
}

TEST(Cli, QualityOfAmplitudeDamping) {
  const CliRun r = run_cli({"quality", "--channel", "amplitude-damping:0.19", "--d", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["q"].get<double>(), 0.9);
}

TEST(Cli, GconcOfBellState) {
  const CliRun r = run_cli({"gconc", "--state", kSamples + "/bell.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["value"].get<double>(), 1.0);
  EXPECT_EQ(j["method"], "pure");
}

TEST(Cli, GconcOfWernerState) {
  const CliRun r = run_cli({"gconc", "--state", kSamples + "/werner.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["value"].get<double>(), 0.6, 1e-9);
}

TEST(Cli, Effective) {
  const CliRun r = run_cli({"effective", "--state", kSamples + "/bell.json", "--channel-a", "phase-damping:0.36"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 0.8, 1e-9);
  EXPECT_EQ(j["kind"], "exact");
}

TEST(Cli, GameIsDeterministic) {
  const std::vector<std::string> args{"--seed", "5", "game", "--game", kSamples + "/bell_statistics_game.json",
                                      "--state", kSamples + "/bell.json", "--restarts", "3"};
  const CliRun a = run_cli(args), b = run_cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NEAR(Json::parse(a.out)["value"].get<double>(), 0.125, 1e-6);
  EXPECT_EQ(Json::parse(a.out)["restarts_used"].get<int>(), 3);
}

TEST(Cli, SeedFromEnvironment) {
  const std::vector<std::string> args{"game", "--game", "bell-statistics", "--state", kSamples + "/bell.json", "--restarts", "2"};
  std::vector<std::string> with_flag = args;
  with_flag.insert(with_flag.begin(), {"--seed", "9"});
  const CliRun flag = run_cli(with_flag);
  setenv("EFFENT_SEED", "9", 1);
  const CliRun env = run_cli(args);
  setenv("EFFENT_SEED", "oops", 1);
  const CliRun bad = run_cli(args);
  unsetenv("EFFENT_SEED");
  EXPECT_EQ(flag.out, env.out);
  EXPECT_EQ(bad.code, 2);
}

TEST(Cli, RestrictedGame) {
  const CliRun r = run_cli({"game", "--game", "bell-statistics", "--state", kSamples + "/bell.json", "--channel-a", "ssr",
                         "--channel-b", "ssr", "--restarts", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(Json::parse(r.out)["value"].get<double>(), 1e-9);
}

TEST(Cli, BecWithExactSimulation) {
  const CliRun r = run_cli({"bec", "--dist", "wrapped-normal:0,1.0", "--theta", "0.7854", "--exact", "--alpha-sq", "100",
                         "--trunc", "170"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["g_abs"].get<double>(), std::exp(-0.5), 1e-11);
  EXPECT_LT(j["exact"]["trace_distance_to_limit"].get<double>(), 1e-2);
}

TEST(Cli, SweepWritesCsv) {
  const auto path = (std::filesystem::temp_directory_path() / "effent_test_sweep.csv").string();
  const CliRun r = run_cli({"sweep", "--family", "wrapped-normal", "--sigma", "0:2:0.5", "--out", path});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path);
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header, "param,g_abs,q_factor");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 5);
  EXPECT_EQ(Json::parse(r.out)["rows"].get<int>(), 5);
}

TEST(Cli, ErrorExitCodes) {
  CliRun r = run_cli({"quality", "--channel", "phase-damping:1.5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("phase"), std::string::npos);
  r = run_cli({"gconc", "--state", temp_file("bad_state.json", "[1,2")});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
  r = run_cli({"bogus"});
  EXPECT_EQ(r.code, 2);
  r = run_cli({"bec", "--dist", "wrapped-normal:0,1", "--theta", "0.5", "--exact", "--alpha-sq", "100", "--trunc", "100"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, SelftestSubset) {
  const CliRun r = run_cli({"selftest", "--criterion", "1", "--criterion", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["criteria"].size(), 2u);
}

}  // namespace
}  // namespace effent
