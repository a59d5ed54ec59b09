// Copyright 2026 The apd Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef APD_CONFIG_HPP_
#define APD_CONFIG_HPP_

#include <map>
#include <string>
#include <vector>

#include "apd/experiments.hpp"

namespace apd {

// Plain-text key=value config. Values are scalars or space-separated arrays;
// '#' starts a comment. Keys of the form path.3 = 2 4 7 5 define per-agent
// edge lists.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text);

  bool has(const std::string& key) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::string get_string(const std::string& key) const;
  std::vector<double> get_array(const std::string& key) const;
  std::vector<std::string> keys() const;

 private:
  std::map<std::string, std::string> values_;
};

// Applies config overrides onto a FlowRoutingConfig. Every field is
// addressable; unknown keys throw std::invalid_argument naming the key.
FlowRoutingConfig flow_config_from(const ConfigFile& cfg,
                                   FlowRoutingConfig base = {});

CounterexampleConfig counterexample_config_from(const ConfigFile& cfg,
                                                CounterexampleConfig base = {});

}  // namespace apd

#endif  // APD_CONFIG_HPP_
