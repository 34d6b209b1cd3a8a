// include/wavefield/roomsim.h

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

#include <array>
#include <string>
#include <vector>

#include "wavefield/dictionary.h"
#include "wavefield/pwd.h"
#include "wavefield/stft.h"

namespace wavefield {

// Shoebox room for the image-source oracle. Walls are indexed x0, xL, y0,
// yL, z0, zL with frequency-independent reflection coefficients.
struct RoomSpec {
  Eigen::Vector3d dimensions{5.0, 4.0, 3.0};
  std::array<double, 6> reflection{0.7, 0.7, 0.7, 0.7, 0.7, 0.7};
  int max_order = 2;
  Eigen::Vector3d source_pos{2.5, 2.0, 1.5};
  Eigen::Vector3d receiver_origin{1.0, 1.0, 1.0};
  double sample_rate = 16000.0;
  double speed_of_sound = 343.0;

  void validate() const;

  std::string to_json() const;
  static RoomSpec from_json(const std::string &text);
};

struct ImageSource {
  Eigen::Vector3d position;
  double amplitude;  // product of wall reflection coefficients
};

// All mirror images of the source whose total bounce count is at most
// max_order, the source itself included (zero bounces, amplitude 1).
std::vector<ImageSource> image_sources(const RoomSpec &room);

// Free-field capture at the array placed at receiver_origin: each channel
// sums amplitude/(4 pi d) copies of the source delayed by d/c using a 32-tap
// Hann-windowed-sinc fractional delay. Output has the source's length.
Eigen::MatrixXd simulate_capture(const RoomSpec &room,
                                 const ArrayGeometry &geom,
                                 const Eigen::VectorXd &source, int jobs = 0);

// Known-truth sparse scene used to fabricate captures whose decomposition
// ground truth is the scene itself.
struct GroundTruthScene {
  uint32_t frames = 0;
  uint32_t bins = 0;
  std::vector<std::vector<TimeFrequencyMap::Atom>> cells;  // t * bins + f

  std::vector<TimeFrequencyMap::Atom> &cell(uint32_t t, uint32_t f) {
    return cells[static_cast<size_t>(t) * bins + f];
  }
  const std::vector<TimeFrequencyMap::Atom> &cell(uint32_t t,
                                                  uint32_t f) const {
    return cells[static_cast<size_t>(t) * bins + f];
  }

  // View of the scene as a decomposition result for comparisons/rendering.
  TimeFrequencyMap to_map(const DeviceDictionary &dict,
                          const DecompositionConfig &cfg) const;
};

// Evaluates sum alpha * beta per cell directly from the dictionary tensor.
SpectralTensor generate_scene(const GroundTruthScene &truth,
                              const DeviceDictionary &dict,
                              const StftConfig &cfg);

}  // namespace wavefield
