// include/wavefield/geometry.h

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
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wavefield {

using ComplexPressure = std::complex<double>;

// Arrival direction. Elevation is the polar angle measured from +z, so the
// unit vector is (sin e cos a, sin e sin a, cos e). The propagation vector of
// the corresponding plane wave is the negated unit vector.
struct Direction {
  double azimuth = 0.0;    // [0, 2*pi)
  double elevation = 0.0;  // [0, pi]

  Direction() = default;
  Direction(double az, double el);

  Eigen::Vector3d unit() const;

  // Maps an arbitrary nonzero vector to its direction.
  static Direction from_unit(const Eigen::Vector3d &v);
};

struct ArrayGeometry {
  std::vector<Eigen::Vector3d> positions;  // meters, array frame
  std::vector<std::string> labels;         // empty, or one per channel

  size_t size() const { return positions.size(); }

  // Throws InvalidArgument unless M >= 1, positions finite, labels consistent
  // and pairwise distances exceed 1e-9 m.
  void validate() const;

  // Near-uniform spherical layout (golden-angle spiral), count points on the
  // surface of the given radius.
  static ArrayGeometry fibonacci_sphere(int count, double radius);

  // Four microphones on a planar square of the given side length, z = 0.
  static ArrayGeometry square(double side);

  // { "positions_m": [[x,y,z],...], "labels": [...] }
  std::string to_json() const;
  static ArrayGeometry from_json(const std::string &text);
};

struct FrequencyGrid {
  double sample_rate = 16000.0;
  uint32_t fft_size = 1024;
  double speed_of_sound = 343.0;

  FrequencyGrid() = default;
  FrequencyGrid(double fs, uint32_t nfft, double c = 343.0);

  uint32_t bin_count() const { return fft_size / 2 + 1; }
  double bin_hz(uint32_t k) const;
  double wavenumber(double freq_hz) const;

  // Identity over (sample_rate, fft_size, speed_of_sound) bit patterns.
  uint64_t content_hash() const;
};

// Pressure of a plane wave arriving from `dir` observed at `pos`:
// p0 * exp(-j k u_prop . pos) with u_prop = -dir.unit(). |result| == p0.
ComplexPressure plane_wave_pressure(double p0, double freq_hz,
                                    const FrequencyGrid &grid,
                                    const Direction &dir,
                                    const Eigen::Vector3d &pos);

// Free-field array response: element m is plane_wave_pressure at position m
// with p0 = 1.
Eigen::VectorXcd steering_vector(const ArrayGeometry &geom, double freq_hz,
                                 const FrequencyGrid &grid,
                                 const Direction &dir);

}  // namespace wavefield
