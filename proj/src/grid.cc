// src/grid.cc

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

#include "wavefield/grid.h"

#include <cmath>
#include <numbers>

#include "wavefield/error.h"
#include "wavefield/io_util.h"

namespace wavefield {

void DirectionGrid::validate() const {
  if (directions.empty()) throw InvalidArgument("grid needs at least 1 direction");
  std::vector<Eigen::Vector3d> units;
  units.reserve(directions.size());
  for (const auto &d : directions) units.push_back(d.unit());
  const double cos_min_sep = std::cos(1e-6);
  for (size_t i = 0; i < units.size(); ++i)
    for (size_t j = i + 1; j < units.size(); ++j)
      if (units[i].dot(units[j]) >= cos_min_sep)
        throw InvalidArgument("grid directions closer than 1e-6 rad");
}

uint64_t DirectionGrid::content_hash() const {
  uint64_t h = 14695981039346656037ull;
  for (const auto &d : directions) {
    h = fnv1a(&d.azimuth, sizeof d.azimuth, h);
    h = fnv1a(&d.elevation, sizeof d.elevation, h);
  }
  return h;
}

DirectionGrid DirectionGrid::equiangular() {
  const double deg = std::numbers::pi / 180.0;
  DirectionGrid g;
  g.scheme = Scheme::kEquiangular;
  g.directions.emplace_back(0.0, 0.0);
  g.directions.emplace_back(0.0, std::numbers::pi);
  for (int el = 10; el <= 170; el += 10)
    for (int az = 0; az <= 350; az += 10)
      g.directions.emplace_back(az * deg, el * deg);
  return g;
}

}  // namespace wavefield
