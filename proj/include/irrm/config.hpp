/* Copyright 2026 The IRRM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef IRRM_CONFIG_HPP_
#define IRRM_CONFIG_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "irrm/types.hpp"

namespace irrm {

// Flat key=value configuration. Blank lines and lines starting with '#'
// are ignored; unknown keys raise FormatError.
void set_config_value(TrainConfig& config, std::string_view key,
                      std::string_view value);
TrainConfig parse_config(std::string_view text, TrainConfig base = {});
TrainConfig load_config(const std::string& path, TrainConfig base = {});

// Canonical rendering, one key per line in a fixed order. Parsing the
// result reproduces the config exactly.
std::string format_config(const TrainConfig& config);
const std::vector<std::string>& config_keys();

std::string format_double(double value);

}  // namespace irrm

#endif  // IRRM_CONFIG_HPP_
