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

#ifndef CATQUDIT_CONFIG_HPP
#define CATQUDIT_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "catqudit/protocol.hpp"

namespace catqudit {

// Run configuration files are flat `key = value [unit]` lines; '#' starts a
// comment. Frequencies take GHz, MHz, kHz or Hz (all meaning omega/2pi) or
// rad/s. Times take s, ms, us or ns. Cavity rates kappa1/kappa2 take 1/s.
// Optional quantities accept `auto` to fall back to the computed default.

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Applies the lines of `text` on top of `cfg`. `source` prefixes error
/// messages. Unknown keys, missing or wrong units and bad numbers throw
/// ConfigError; physical consistency is left to ProtocolConfig::validate.
void apply_config_text(const std::string& text, ProtocolConfig& cfg,
                       const std::string& source = "<config>");

void apply_config_file(const std::string& path, ProtocolConfig& cfg);

std::vector<std::string> preset_names();
/// Text of a bundled preset; throws ConfigError for unknown names.
const std::string& preset_text(const std::string& name);
ProtocolConfig load_preset(const std::string& name);

/// Every setting of `cfg` in SI units with shortest round-trip numbers, so
/// that apply_config_text on a default ProtocolConfig reproduces `cfg`
/// bit for bit.
std::string to_config_text(const ProtocolConfig& cfg);

}  // namespace catqudit

#endif  // CATQUDIT_CONFIG_HPP
