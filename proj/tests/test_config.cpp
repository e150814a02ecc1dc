// Copyright 2026 The catqudit Authors
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

#include "catqudit/config.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "catqudit/units.hpp"

namespace catqudit {
namespace {

void expect_same_params(const SystemParams& a, const SystemParams& b) {
  EXPECT_EQ(a.omega_fg, b.omega_fg);
  EXPECT_EQ(a.omega_fe, b.omega_fe);
  EXPECT_EQ(a.omega_eg, b.omega_eg);
  EXPECT_EQ(a.omega_c1, b.omega_c1);
  EXPECT_EQ(a.omega_c2, b.omega_c2);
  EXPECT_EQ(a.omega_c1_tilde, b.omega_c1_tilde);
  EXPECT_EQ(a.omega_c2_tilde, b.omega_c2_tilde);
  EXPECT_EQ(a.g1, b.g1);
  EXPECT_EQ(a.g2, b.g2);
  EXPECT_EQ(a.mu1, b.mu1);
  EXPECT_EQ(a.mu2, b.mu2);
  EXPECT_EQ(a.d, b.d);
  EXPECT_EQ(a.s, b.s);
  EXPECT_EQ(a.matching, b.matching);
  EXPECT_EQ(a.printed, b.printed);
  EXPECT_EQ(a.ratios.g1_prime, b.ratios.g1_prime);
  EXPECT_EQ(a.ratios.mu2_prime, b.ratios.mu2_prime);
}

TEST(Preset, ReproducesBuiltInParametersBitwise) {
  const ProtocolConfig cfg = load_preset("table1");
  expect_same_params(cfg.params, table1_params());
  EXPECT_EQ(preset_names(), std::vector<std::string>{"table1"});
  EXPECT_THROW(load_preset("nope"), ConfigError);
}

TEST(Preset, ShippedFileMatchesEmbeddedText) {
  std::ifstream in(std::string(CATQUDIT_PRESET_DIR) + "/table1.cfg");
  ASSERT_TRUE(in.good());
  std::ostringstream text;
  text << in.rdbuf();
  EXPECT_EQ(text.str(), preset_text("table1"));
}

TEST(ConfigText, RoundTripIsExact) {
  ProtocolConfig cfg = load_preset("table1");
  cfg.noise = NoiseParams::from_times(7.3e-6, 2.5e-6);
  cfg.level = ModelLevel::kIntermediate;
  cfg.x = 0.1;
  cfg.dtau_frac = -0.05;
  cfg.gcr_frac = 0.001;
  cfg.alpha_override = Complex(3.1, -0.2);
  cfg.n1 = 5;
  cfg.integrator.method = Method::kAdaptive;
  cfg.integrator.samples = 11;
  cfg.integrator.reduce_to_reachable = false;
  cfg.params.ratios.g2_prime = 0.0123456789;
  const std::string text = to_config_text(cfg);
  ProtocolConfig back;
  apply_config_text(text, back);
  expect_same_params(back.params, cfg.params);
  EXPECT_EQ(back.params.ratios.g2_prime, 0.0123456789);
  EXPECT_EQ(back.noise.kappa1, cfg.noise.kappa1);
  EXPECT_EQ(back.noise.T, cfg.noise.T);
  EXPECT_EQ(back.level, cfg.level);
  EXPECT_EQ(back.x, cfg.x);
  EXPECT_EQ(back.dtau_frac, cfg.dtau_frac);
  EXPECT_EQ(back.gcr_frac, cfg.gcr_frac);
  EXPECT_EQ(back.alpha_override, cfg.alpha_override);
  EXPECT_EQ(back.n1, cfg.n1);
  EXPECT_FALSE(back.n2.has_value());
  EXPECT_EQ(back.integrator.method, Method::kAdaptive);
  EXPECT_EQ(back.integrator.samples, 11);
  EXPECT_FALSE(back.integrator.reduce_to_reachable);
  EXPECT_EQ(to_config_text(back), text);
}

TEST(ConfigText, UnitsAndComments) {
  ProtocolConfig cfg;
  apply_config_text(
      "# comment\n"
      "g1 = 0.5 GHz   # trailing\n"
      "g2 = 1000 kHz\n"
      "omega_c2_tilde = 6.28 rad/s\n"
      "T = 3 us\n"
      "kappa_inv = 20000 ns\n"
      "integrator.max_step = inf\n"
      "\n",
      cfg);
  EXPECT_DOUBLE_EQ(cfg.params.g1, ghz(0.5));
  EXPECT_DOUBLE_EQ(cfg.params.g2, mhz(1.0));
  EXPECT_DOUBLE_EQ(cfg.params.omega_c2_tilde, 6.28);
  EXPECT_DOUBLE_EQ(cfg.noise.T, 3e-6);
  EXPECT_DOUBLE_EQ(cfg.noise.kappa1, 1.0 / 20e-6);
  EXPECT_TRUE(std::isinf(cfg.integrator.max_step));
}

TEST(ConfigText, AutoAndPrintedReset) {
  ProtocolConfig cfg = load_preset("table1");
  apply_config_text("mu1 = auto\nprinted = none\nprinted.delta = 2 GHz\nkappa_inv = inf\n", cfg);
  EXPECT_FALSE(cfg.params.mu1.has_value());
  ASSERT_EQ(cfg.params.printed.size(), 1u);
  EXPECT_DOUBLE_EQ(cfg.params.printed.at("delta"), ghz(2.0));
  EXPECT_EQ(cfg.noise.kappa1, 0.0);
}

TEST(ConfigText, ErrorsNameSourceAndLine) {
  ProtocolConfig cfg;
  auto message = [&](const std::string& text) {
    try {
      apply_config_text(text, cfg, "test.cfg");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_EQ(message("\n\nbogus = 1\n").rfind("test.cfg:3:", 0), 0u);
  EXPECT_NE(message("g1 = 236\n").find("needs a unit"), std::string::npos);
  EXPECT_NE(message("g1 = 236 furlongs\n").find("unknown frequency unit"), std::string::npos);
  EXPECT_NE(message("d = 3.5\n").find("bad integer"), std::string::npos);
  EXPECT_NE(message("x = 0.1 GHz\n").find("takes no unit"), std::string::npos);
  EXPECT_NE(message("level\n").find("key = value"), std::string::npos);
  EXPECT_NE(message("level = coarse\n"), "no error");
  EXPECT_NE(message("kappa1 = 5 GHz\n").find("1/s"), std::string::npos);
  EXPECT_THROW(apply_config_file("/nonexistent/x.cfg", cfg), ConfigError);
}

}  // namespace
}  // namespace catqudit
