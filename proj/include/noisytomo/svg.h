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

#include "noisytomo/information.h"
#include "noisytomo/stats.h"

namespace noisytomo {

/// Equirectangular (φ horizontal, θ vertical) heatmap of L with a color bar.
std::string bloch_map_svg(const BlochMap& map);

/// Empirical histogram as bars with the theoretical density as a polyline.
/// Both histograms must share their binning.
std::string loss_histogram_svg(const Histogram& empirical, const Histogram& theory,
                               const std::string& title);

}  // namespace noisytomo
