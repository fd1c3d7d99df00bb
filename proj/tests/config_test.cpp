#include "pinball/config.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace pinball {
namespace {

LabConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

TEST(ConfigTest, Defaults) {
  const LabConfig c = parse("");
  EXPECT_EQ(c.distances, std::vector<int>{3});
  EXPECT_EQ(c.shots, 10000u);
  EXPECT_TRUE(c.decode_l2);
  EXPECT_NO_THROW(validate_config(c));
}

TEST(ConfigTest, ParsesListsAndComments) {
  const LabConfig c = parse(
      "# sweep\n"
      "d = 3, 5,7\n"
      "p=1e-4,1e-3  # two rates\n"
      "\n"
      "shots = 1e6\n"
      "seed=42\n"
      "predecoder = pinball,clique,none\n"
      "l2 = false\n"
      "lp_volts = 0.54\n"
      "packet_bits = 128\n");
  EXPECT_EQ(c.distances, (std::vector<int>{3, 5, 7}));
  EXPECT_EQ(c.rates, (std::vector<double>{1e-4, 1e-3}));
  EXPECT_EQ(c.shots, 1000000u);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.predecoders.size(), 3u);
  EXPECT_FALSE(c.decode_l2);
  EXPECT_DOUBLE_EQ(c.energy.lp_volts, 0.54);
  EXPECT_EQ(c.energy.packet_bits, 128);
}

TEST(ConfigTest, RejectsUnknownKeysWithLineNumber) {
  try {
    parse("d=3\ndistance=5\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("distance"), std::string::npos);
  }
}

TEST(ConfigTest, RejectsMalformedValues) {
  EXPECT_THROW(parse("d=three\n"), ConfigError);
  EXPECT_THROW(parse("d=\n"), ConfigError);
  EXPECT_THROW(parse("p=0.1x\n"), ConfigError);
  EXPECT_THROW(parse("shots=0\n"), ConfigError);
  EXPECT_THROW(parse("shots=2.5\n"), ConfigError);
  EXPECT_THROW(parse("seed=-1\n"), ConfigError);
  EXPECT_THROW(parse("l2=maybe\n"), ConfigError);
  EXPECT_THROW(parse("predecoder=mwpm\n"), ConfigError);
  EXPECT_THROW(parse("just a line\n"), ConfigError);
}

TEST(ConfigTest, ValidateRanges) {
  LabConfig c;
  c.distances = {4};
  EXPECT_THROW(validate_config(c), ConfigError);
  c = LabConfig{};
  c.rates = {0.5};
  EXPECT_THROW(validate_config(c), ConfigError);
  c = LabConfig{};
  c.threads = 0;
  EXPECT_THROW(validate_config(c), ConfigError);
  c = LabConfig{};
  c.energy.header_bits = 64;
  EXPECT_THROW(validate_config(c), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/lab.cfg"), ConfigError);
}

TEST(ConfigTest, EchoRoundTrips) {
  const LabConfig c = parse("d=5,7\np=0.002\nseed=9\npredecoder=clique\nbudget_w=2\n");
  const auto lines = echo_config(c);
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  const LabConfig back = parse(text);
  EXPECT_EQ(echo_config(back), lines);
  for (const auto& l : lines) EXPECT_EQ(l.find("threads"), std::string::npos);
}

TEST(ConfigTest, RunConfigCopiesFields) {
  LabConfig c = parse("d=5,7\np=1e-3\nshots=77\nseed=4\nl2=no\n");
  c.threads = 3;
  const RunConfig r = run_config(c, 7, 2e-3);
  EXPECT_EQ(r.distance, 7);
  EXPECT_EQ(r.p, 2e-3);
  EXPECT_EQ(r.shots, 77u);
  EXPECT_EQ(r.seed, 4u);
  EXPECT_FALSE(r.decode_l2);
  EXPECT_EQ(r.threads, 3);
}

}  // namespace
}  // namespace pinball
