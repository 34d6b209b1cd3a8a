// include/wavefield/dictionary.h

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

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wavefield/geometry.h"
#include "wavefield/grid.h"

namespace wavefield {

enum class BuilderId : uint32_t {
  kFreeField = 0,
  kRigidSphere = 1,
  kImported = 2,
};

// Per-direction, per-frequency array responses of one device. The tensor
// holds complex64 entries in [frequency][direction][microphone] order, where
// the frequency axis runs over the selected bin subset.
struct DeviceDictionary {
  ArrayGeometry geometry;
  DirectionGrid grid;
  FrequencyGrid freqs;
  std::vector<uint32_t> bins;  // selected bin indices, ascending
  std::vector<std::complex<float>> tensor;

  std::string device_name;
  BuilderId builder = BuilderId::kImported;
  double sphere_radius = 0.0;  // 0 for non-sphere builders
  double p0 = 1.0;             // amplitude convention of the atoms

  size_t num_mics() const { return geometry.size(); }
  size_t num_directions() const { return grid.size(); }
  size_t num_bins() const { return bins.size(); }

  std::complex<float> at(size_t f, size_t l, size_t m) const {
    return tensor[(f * grid.size() + l) * geometry.size() + m];
  }

  // M x L atom matrix for one selected bin, widened to double precision.
  Eigen::MatrixXcd atoms(size_t f) const;

  // Position of a bin index within `bins`, or -1 if not selected.
  ptrdiff_t bin_slot(uint32_t bin) const;

  // Throws unless dimensions, bins, and entries are consistent and finite.
  void validate() const;
};

// Bins with center frequency at or below 8 kHz; the whole spectrum when the
// sample rate is 16 kHz or less.
std::vector<uint32_t> default_bins(const FrequencyGrid &freqs);

DeviceDictionary build_free_field(const ArrayGeometry &geom,
                                  const DirectionGrid &grid,
                                  const FrequencyGrid &freqs,
                                  std::vector<uint32_t> bins,
                                  const std::string &device_name = "free_field",
                                  int jobs = 0);

// Rigid sphere with surface-mounted microphones given by direction.
struct SphereSpec {
  double radius = 0.042;
  std::vector<Direction> mic_directions;
  std::function<int(double)> truncation_rule = n_terms_for_ka_default;

  static int n_terms_for_ka_default(double ka);
};

// Valid for ka <= 40 at every selected bin (truncation-rule guard).
DeviceDictionary build_rigid_sphere(const SphereSpec &spec,
                                    const DirectionGrid &grid,
                                    const FrequencyGrid &freqs,
                                    std::vector<uint32_t> bins,
                                    const std::string &device_name =
                                        "rigid_sphere",
                                    int jobs = 0);

// Container format: magic "WFD1"; little-endian header M, L, F (u32),
// sample_rate (f64), fft_size (u32), radius-or-0 (f64), builder id (u32),
// metadata length (u32); JSON metadata (geometry, grid, bins, device name,
// speed of sound, p0); then F*L*M complex64 (re, im) pairs in [f][l][m]
// row-major order. Round-trips bit-identically.
void save_dictionary(const DeviceDictionary &dict, const std::string &path);
DeviceDictionary load_dictionary(const std::string &path);

}  // namespace wavefield
