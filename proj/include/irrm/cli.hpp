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

#ifndef IRRM_CLI_HPP_
#define IRRM_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace irrm::cli {

// Version of the --json summary layout.
inline constexpr int kJsonSchemaVersion = 1;

// Runs one subcommand. args excludes the program name. Returns 0 on
// success, 2 on usage errors and 1 on runtime errors.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace irrm::cli

#endif  // IRRM_CLI_HPP_
