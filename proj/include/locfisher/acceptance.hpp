// Copyright 2026 The LocFisher Authors
//
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

#ifndef LOCFISHER_ACCEPTANCE_HPP
#define LOCFISHER_ACCEPTANCE_HPP

#include <string>
#include <vector>

// The validation battery behind `locfisher validate`: one entry per
// reproducibility criterion, each evaluated at its pinned tolerance with a
// measured-versus-expected summary.
namespace locfisher::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct BatteryOptions {
  // Criteria (by id or name) to mark failed, for harness self-tests.
  std::vector<std::string> inject_failures;
};

std::vector<CriterionResult> run_battery(const BatteryOptions& options = {});

}  // namespace locfisher::acceptance

#endif  // LOCFISHER_ACCEPTANCE_HPP
