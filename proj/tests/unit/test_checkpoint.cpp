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

#include <filesystem>

#include "doctest.h"
#include "irrm/checkpoint.hpp"
#include "irrm/config.hpp"
#include "irrm/errors.hpp"
#include "irrm/io.hpp"
#include "test_util.hpp"

namespace irrm {
namespace {

namespace fs = std::filesystem;

TEST_CASE("checkpoints round-trip exactly") {
  auto dir = testing::temp_dir("ckpt");
  Checkpoint ck;
  ck.config.k_neighbors = 5;
  ck.config.seed = 99;
  ck.params = ModelParams::init(7, 9, 6, 40, 3, 4);
  ck.codebook = Codebook::random(1, 40, 6, 4);
  ck.codebook.set_labels(PhonemeInventory::cmu().symbols());
  ck.phase = Phase::kAdapt;
  ck.steps_done = 123;
  const std::string path = (dir / "c.bin").string();
  save_checkpoint(ck, path);
  Checkpoint back = load_checkpoint(path);
  CHECK(back == ck);
  CHECK(format_config(back.config) == format_config(ck.config));

  fs::resize_file(path, fs::file_size(path) - 8);
  CHECK_THROWS_AS(load_checkpoint(path), FormatError);
  write_text_file(path, "IRCB");
  CHECK_THROWS_AS(load_checkpoint(path), FormatError);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace irrm
