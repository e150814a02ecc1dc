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

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "catqudit/text.hpp"
#include "catqudit/units.hpp"

namespace catqudit {

namespace {

const std::string kTable1 = R"(# Two-cavity flux-qutrit setup, d = 3 cat qudit with s = 1.
# Frequencies are omega/2pi.

omega_fg = 12 GHz
omega_fe = 7 GHz
omega_eg = 5 GHz
omega_c1 = 15 GHz
omega_c2 = 9 GHz
omega_c1_tilde = 9.96 GHz
omega_c2_tilde = 4 GHz

g1 = 236 MHz
g2 = 223 MHz
mu1 = 192.1 MHz
mu2 = 148.7 MHz

d = 3
s = 1
matching = exact

# Tabulated detunings, kept for comparison with the recomputed ones.
printed.omega_c1_tilde = 9.96 GHz
printed.Delta1 = 3 GHz
printed.Delta2 = 2 GHz
printed.Delta1_tilde = 8 GHz
printed.Delta2_tilde = 3 GHz
printed.Delta1_prime = 10 GHz
printed.Delta2_prime = 4 GHz
printed.Delta12 = 6 GHz
printed.Delta12_tilde = 5.96 GHz
printed.delta = 1 GHz
printed.delta1 = 2.04 GHz
printed.delta1_tilde = 2.96 GHz
printed.delta1_prime = 4.96 GHz
printed.delta2 = 3 GHz
printed.delta2_tilde = 8 GHz
printed.delta2_prime = 1 GHz
printed.mu1 = 192.1 MHz
printed.mu2 = 148.7 MHz
)";

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> table = {{"table1", kTable1}};
  return table;
}

struct Value {
  std::string number;
  std::string unit;
};

Value split_value(std::string_view text) {
  text = trim(text);
  const auto space = text.find_first_of(" \t");
  if (space == std::string_view::npos) return {std::string(text), ""};
  return {std::string(text.substr(0, space)),
          std::string(trim(text.substr(space + 1)))};
}

class Parser {
 public:
  Parser(ProtocolConfig& cfg, std::string source)
      : cfg_(cfg), source_(std::move(source)) {}

  void line(int number, std::string_view raw) {
    line_ = number;
    const auto hash = raw.find('#');
    std::string_view text = trim(raw.substr(0, hash));
    if (text.empty()) return;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value'");
    const std::string key(trim(text.substr(0, eq)));
    value_ = std::string(trim(text.substr(eq + 1)));
    if (key.empty()) fail("empty key");
    if (value_.empty()) fail("empty value for '" + key + "'");
    key_ = key;
    dispatch();
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(source_ + ":" + std::to_string(line_) + ": " + what);
  }

  double number(const std::string& text) const {
    try {
      return parse_double(text);
    } catch (const std::invalid_argument&) {
      fail("'" + key_ + "': bad number '" + text + "'");
    }
  }

  bool is_auto() const { return value_ == "auto"; }

  double plain() const {
    const Value v = split_value(value_);
    if (!v.unit.empty()) fail("'" + key_ + "' takes no unit");
    return number(v.number);
  }

  int integer() const {
    const Value v = split_value(value_);
    if (!v.unit.empty()) fail("'" + key_ + "' takes no unit");
    try {
      return parse_int(v.number);
    } catch (const std::invalid_argument&) {
      fail("'" + key_ + "': bad integer '" + v.number + "'");
    }
  }

  bool boolean() const {
    if (value_ == "true" || value_ == "1") return true;
    if (value_ == "false" || value_ == "0") return false;
    fail("'" + key_ + "': expected true or false");
  }

  double frequency() const {
    const Value v = split_value(value_);
    const double x = number(v.number);
    if (v.unit == "GHz") return ghz(x);
    if (v.unit == "MHz") return mhz(x);
    if (v.unit == "kHz") return khz(x);
    if (v.unit == "Hz") return kTwoPi * x;
    if (v.unit == "rad/s") return x;
    if (v.unit.empty()) fail("'" + key_ + "' needs a unit (GHz, MHz, kHz, Hz, rad/s)");
    fail("'" + key_ + "': unknown frequency unit '" + v.unit + "'");
  }

  double time() const {
    const Value v = split_value(value_);
    const double x = number(v.number);
    if (std::isinf(x) && v.unit.empty()) return x;
    if (v.unit == "s") return x;
    if (v.unit == "ms") return x * 1e-3;
    if (v.unit == "us") return microseconds(x);
    if (v.unit == "ns") return nanoseconds(x);
    if (v.unit.empty()) fail("'" + key_ + "' needs a unit (s, ms, us, ns)");
    fail("'" + key_ + "': unknown time unit '" + v.unit + "'");
  }

  double rate() const {
    const Value v = split_value(value_);
    if (v.unit != "1/s") fail("'" + key_ + "' needs the unit 1/s");
    return number(v.number);
  }

  void dispatch() {
    SystemParams& p = cfg_.params;
    NoiseParams& noise = cfg_.noise;
    IntegratorConfig& in = cfg_.integrator;

    using Setter = std::function<void()>;
    const std::map<std::string, Setter> table = {
        {"omega_fg", [&] { p.omega_fg = frequency(); }},
        {"omega_fe", [&] { p.omega_fe = frequency(); }},
        {"omega_eg", [&] { p.omega_eg = frequency(); }},
        {"omega_c1", [&] { p.omega_c1 = frequency(); }},
        {"omega_c2", [&] { p.omega_c2 = frequency(); }},
        {"omega_c1_tilde",
         [&] {
           if (is_auto()) p.omega_c1_tilde.reset();
           else p.omega_c1_tilde = frequency();
         }},
        {"omega_c2_tilde", [&] { p.omega_c2_tilde = frequency(); }},
        {"g1", [&] { p.g1 = frequency(); }},
        {"g2", [&] { p.g2 = frequency(); }},
        {"mu1",
         [&] {
           if (is_auto()) p.mu1.reset();
           else p.mu1 = frequency();
         }},
        {"mu2",
         [&] {
           if (is_auto()) p.mu2.reset();
           else p.mu2 = frequency();
         }},
        {"ratio.g1_tilde", [&] { p.ratios.g1_tilde = plain(); }},
        {"ratio.g1_prime", [&] { p.ratios.g1_prime = plain(); }},
        {"ratio.g2_tilde", [&] { p.ratios.g2_tilde = plain(); }},
        {"ratio.g2_prime", [&] { p.ratios.g2_prime = plain(); }},
        {"ratio.mu1_tilde", [&] { p.ratios.mu1_tilde = plain(); }},
        {"ratio.mu1_prime", [&] { p.ratios.mu1_prime = plain(); }},
        {"ratio.mu2", [&] { p.ratios.mu2 = plain(); }},
        {"ratio.mu2_tilde", [&] { p.ratios.mu2_tilde = plain(); }},
        {"ratio.mu2_prime", [&] { p.ratios.mu2_prime = plain(); }},
        {"d", [&] { p.d = integer(); }},
        {"s", [&] { p.s = plain(); }},
        {"matching",
         [&] {
           if (value_ == "exact") p.matching = Matching::kExact;
           else if (value_ == "as_printed") p.matching = Matching::kAsPrinted;
           else fail("'matching' must be exact or as_printed");
         }},
        {"printed",
         [&] {
           if (value_ != "none") fail("'printed' only accepts 'none'");
           p.printed.clear();
         }},
        {"kappa_inv",
         [&] {
           const double t = time();
           const double k = (t > 0.0 && std::isfinite(t)) ? 1.0 / t : 0.0;
           noise.kappa1 = noise.kappa2 = k;
         }},
        {"kappa1", [&] { noise.kappa1 = rate(); }},
        {"kappa2", [&] { noise.kappa2 = rate(); }},
        {"T", [&] { noise.T = time(); }},
        {"level",
         [&] {
           try {
             cfg_.level = parse_model_level(value_);
           } catch (const std::invalid_argument& e) {
             fail(e.what());
           }
         }},
        {"x", [&] { cfg_.x = plain(); }},
        {"dtau_frac", [&] { cfg_.dtau_frac = plain(); }},
        {"gcr_frac", [&] { cfg_.gcr_frac = plain(); }},
        {"alpha",
         [&] {
           if (is_auto()) {
             cfg_.alpha_override.reset();
             return;
           }
           const auto parts = split(value_, ',');
           if (parts.size() == 1) {
             cfg_.alpha_override = Complex(number(parts[0]), 0.0);
           } else if (parts.size() == 2) {
             cfg_.alpha_override = Complex(number(parts[0]), number(parts[1]));
           } else {
             fail("'alpha' is 're' or 're, im'");
           }
         }},
        {"n1",
         [&] {
           if (is_auto()) cfg_.n1.reset();
           else cfg_.n1 = integer();
         }},
        {"n2",
         [&] {
           if (is_auto()) cfg_.n2.reset();
           else cfg_.n2 = integer();
         }},
        {"integrator.method",
         [&] {
           if (value_ == "rk4") in.method = Method::kRk4;
           else if (value_ == "adaptive") in.method = Method::kAdaptive;
           else fail("'integrator.method' must be rk4 or adaptive");
         }},
        {"integrator.max_step", [&] { in.max_step = time(); }},
        {"integrator.rel_tol", [&] { in.rel_tol = plain(); }},
        {"integrator.abs_tol", [&] { in.abs_tol = plain(); }},
        {"integrator.steps_per_period",
         [&] { in.steps_per_fastest_period = integer(); }},
        {"integrator.reduce", [&] { in.reduce_to_reachable = boolean(); }},
        {"integrator.samples", [&] { in.samples = integer(); }},
        {"integrator.check_positivity", [&] { in.check_positivity = boolean(); }},
    };

    if (key_.rfind("printed.", 0) == 0) {
      const std::string name = key_.substr(8);
      if (name.empty()) fail("empty printed name");
      p.printed[name] = frequency();
      return;
    }
    const auto it = table.find(key_);
    if (it == table.end()) fail("unknown key '" + key_ + "'");
    it->second();
  }

  ProtocolConfig& cfg_;
  std::string source_;
  int line_ = 0;
  std::string key_;
  std::string value_;
};

}  // namespace

void apply_config_text(const std::string& text, ProtocolConfig& cfg,
                       const std::string& source) {
  Parser parser(cfg, source);
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) parser.line(++number, raw);
}

void apply_config_file(const std::string& path, ProtocolConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  apply_config_text(text.str(), cfg, path);
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : presets()) names.push_back(name);
  return names;
}

const std::string& preset_text(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return it->second;
}

ProtocolConfig load_preset(const std::string& name) {
  ProtocolConfig cfg;
  apply_config_text(preset_text(name), cfg, "preset:" + name);
  return cfg;
}

std::string to_config_text(const ProtocolConfig& cfg) {
  const SystemParams& p = cfg.params;
  std::ostringstream out;
  auto freq = [&](const std::string& key, double v) {
    out << key << " = " << format_double(v) << " rad/s\n";
  };
  auto plain = [&](const std::string& key, double v) {
    out << key << " = " << format_double(v) << "\n";
  };
  auto time = [&](const std::string& key, double v) {
    if (std::isinf(v)) out << key << " = inf\n";
    else out << key << " = " << format_double(v) << " s\n";
  };

  freq("omega_fg", p.omega_fg);
  freq("omega_fe", p.omega_fe);
  freq("omega_eg", p.omega_eg);
  freq("omega_c1", p.omega_c1);
  freq("omega_c2", p.omega_c2);
  if (p.omega_c1_tilde) freq("omega_c1_tilde", *p.omega_c1_tilde);
  else out << "omega_c1_tilde = auto\n";
  freq("omega_c2_tilde", p.omega_c2_tilde);
  freq("g1", p.g1);
  freq("g2", p.g2);
  if (p.mu1) freq("mu1", *p.mu1);
  else out << "mu1 = auto\n";
  if (p.mu2) freq("mu2", *p.mu2);
  else out << "mu2 = auto\n";

  plain("ratio.g1_tilde", p.ratios.g1_tilde);
  plain("ratio.g1_prime", p.ratios.g1_prime);
  plain("ratio.g2_tilde", p.ratios.g2_tilde);
  plain("ratio.g2_prime", p.ratios.g2_prime);
  plain("ratio.mu1_tilde", p.ratios.mu1_tilde);
  plain("ratio.mu1_prime", p.ratios.mu1_prime);
  plain("ratio.mu2", p.ratios.mu2);
  plain("ratio.mu2_tilde", p.ratios.mu2_tilde);
  plain("ratio.mu2_prime", p.ratios.mu2_prime);

  out << "d = " << p.d << "\n";
  plain("s", p.s);
  out << "matching = "
      << (p.matching == Matching::kExact ? "exact" : "as_printed") << "\n";
  out << "printed = none\n";
  for (const auto& [name, v] : p.printed) freq("printed." + name, v);

  out << "kappa1 = " << format_double(cfg.noise.kappa1) << " 1/s\n";
  out << "kappa2 = " << format_double(cfg.noise.kappa2) << " 1/s\n";
  time("T", cfg.noise.T);

  out << "level = " << to_string(cfg.level) << "\n";
  plain("x", cfg.x);
  plain("dtau_frac", cfg.dtau_frac);
  plain("gcr_frac", cfg.gcr_frac);
  if (cfg.alpha_override) {
    out << "alpha = " << format_double(cfg.alpha_override->real()) << ", "
        << format_double(cfg.alpha_override->imag()) << "\n";
  } else {
    out << "alpha = auto\n";
  }
  if (cfg.n1) out << "n1 = " << *cfg.n1 << "\n";
  else out << "n1 = auto\n";
  if (cfg.n2) out << "n2 = " << *cfg.n2 << "\n";
  else out << "n2 = auto\n";

  const IntegratorConfig& in = cfg.integrator;
  out << "integrator.method = "
      << (in.method == Method::kRk4 ? "rk4" : "adaptive") << "\n";
  time("integrator.max_step", in.max_step);
  plain("integrator.rel_tol", in.rel_tol);
  plain("integrator.abs_tol", in.abs_tol);
  out << "integrator.steps_per_period = " << in.steps_per_fastest_period << "\n";
  out << "integrator.reduce = " << (in.reduce_to_reachable ? "true" : "false")
      << "\n";
  out << "integrator.samples = " << in.samples << "\n";
  out << "integrator.check_positivity = "
      << (in.check_positivity ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace catqudit
