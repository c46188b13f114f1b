// Copyright 2026 The fsds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "fsds/geometry/scale_quantization.hpp"
#include "fsds/net/network_config.hpp"

namespace fsds::net {

/// Receptive field of every tapped stage output. A k x k stride-1 conv grows
/// the field by (k - 1) * jump; a 2x2 stride-2 pool grows it by jump and
/// doubles the jump.
inline geometry::ReceptiveFieldSchedule compute_receptive_fields(const NetworkConfig& cfg) {
  cfg.validate();
  std::vector<int> fields;
  int r = 1, jump = 1;
  for (std::size_t s = 0; s < cfg.stages.size(); ++s) {
    const auto& st = cfg.stages[s];
    for (std::size_t c = 0; c < st.conv_channels.size(); ++c) r += (st.kernel - 1) * jump;
    for (int t : cfg.taps)
      if (t == static_cast<int>(s) + 1) fields.push_back(r);
    if (st.pool_after) {
      r += jump;
      jump *= 2;
    }
  }
  return geometry::ReceptiveFieldSchedule(fields, cfg.lambda);
}

}  // namespace fsds::net
