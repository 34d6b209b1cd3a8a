// include/wavefield/grid.h

// Copyright 2026  The Wavefield Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABILITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include "wavefield/geometry.h"

namespace wavefield {

// Candidate arrival directions indexing the dictionary atoms. Synthesis
// treats the content hash as the grid's identity: two grids with equal hash
// assign the same meaning to every atom index.
struct DirectionGrid {
  enum class Scheme : uint32_t { kEquiangular = 0, kCustom = 1 };

  std::vector<Direction> directions;
  Scheme scheme = Scheme::kCustom;

  size_t size() const { return directions.size(); }

  // Throws InvalidArgument unless L >= 1 and directions are pairwise
  // separated by more than 1e-6 rad.
  void validate() const;

  // FNV-1a over the (azimuth, elevation) double bit patterns in order.
  uint64_t content_hash() const;

  // Both poles plus elevations 10..170 deg by 10 deg, each with azimuths
  // 0..350 deg by 10 deg: 2 + 17 * 36 = 614 directions.
  static DirectionGrid equiangular();
};

}  // namespace wavefield
