// Copyright 2026 The noisytomo Authors
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


#pragma once

#include <string>
#include <vector>

namespace noisytomo {

struct CheckResult {
  std::string name;
  bool passed = false;
  /// Worst observed deviation and the tolerance it was held to.
  double deviation = 0.0;
  double tolerance = 0.0;
};

/// Cross-module consistency checks: Kraus folding against the closed-form
/// noisy operators, decomposition of unity for clear and fuzzy operators,
/// and the ⟨c̃|H|c̃⟩ = 2n identity with a single zero mode.
std::vector<CheckResult> run_selfcheck();

}  // namespace noisytomo
