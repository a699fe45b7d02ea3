// Copyright 2026 The cprepair Authors
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

#include "cprepair/repair_sdp.hpp"

namespace cprepair::oracle {

/// Independent search over one-mode dD = [[d1, d3], [d3, d2]]. For fixed
/// (d1, d3) the smallest feasible d2 is found by bisection (feasibility is
/// monotone in d2 and the cost increases with it). What remains is convex in
/// (d1, d3) and is minimised by nested golden-section searches down to
/// brackets of width `grid_resolution`, which is also reported as
/// optimality_gap.
RepairResult brute_force_repair_oracle(const RepairProblem& p, double grid_resolution);

}  // namespace cprepair::oracle
