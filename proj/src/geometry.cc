// src/geometry.cc

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

#include "wavefield/geometry.h"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "wavefield/error.h"
#include "wavefield/io_util.h"

namespace wavefield {

using json = nlohmann::json;

Direction::Direction(double az, double el) : azimuth(az), elevation(el) {
  if (!std::isfinite(az) || !std::isfinite(el))
    throw InvalidArgument("direction angles must be finite");
  if (az < 0.0 || az >= 2.0 * std::numbers::pi)
    throw InvalidArgument("azimuth out of [0, 2pi)");
  if (el < 0.0 || el > std::numbers::pi)
    throw InvalidArgument("elevation out of [0, pi]");
}

Eigen::Vector3d Direction::unit() const {
  double se = std::sin(elevation);
  return {se * std::cos(azimuth), se * std::sin(azimuth),
          std::cos(elevation)};
}

Direction Direction::from_unit(const Eigen::Vector3d &v) {
  double n = v.norm();
  if (!(n > 0.0) || !v.allFinite())
    throw InvalidArgument("cannot derive a direction from a zero vector");
  double el = std::acos(std::clamp(v.z() / n, -1.0, 1.0));
  double az = std::atan2(v.y(), v.x());
  if (az < 0.0) az += 2.0 * std::numbers::pi;
  if (az >= 2.0 * std::numbers::pi) az = 0.0;
  return Direction(az, el);
}

void ArrayGeometry::validate() const {
  if (positions.empty()) throw InvalidArgument("geometry needs at least 1 mic");
  if (!labels.empty() && labels.size() != positions.size())
    throw InvalidArgument("label count does not match channel count");
  for (const auto &p : positions)
    if (!p.allFinite()) throw InvalidArgument("non-finite mic position");
  for (size_t i = 0; i < positions.size(); ++i)
    for (size_t j = i + 1; j < positions.size(); ++j)
      if ((positions[i] - positions[j]).norm() <= 1e-9)
        throw InvalidArgument("duplicate mic positions");
}

ArrayGeometry ArrayGeometry::fibonacci_sphere(int count, double radius) {
  if (count < 1) throw InvalidArgument("mic count must be >= 1");
  if (!(radius > 0.0)) throw InvalidArgument("radius must be > 0");
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  ArrayGeometry g;
  g.positions.reserve(count);
  for (int i = 0; i < count; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / count;
    double r = std::sqrt(1.0 - z * z);
    double th = golden * i;
    g.positions.emplace_back(radius * r * std::cos(th),
                             radius * r * std::sin(th), radius * z);
  }
  g.validate();
  return g;
}

ArrayGeometry ArrayGeometry::square(double side) {
  if (!(side > 0.0)) throw InvalidArgument("side must be > 0");
  double h = side / 2.0;
  ArrayGeometry g;
  g.positions = {{-h, -h, 0.0}, {h, -h, 0.0}, {h, h, 0.0}, {-h, h, 0.0}};
  g.validate();
  return g;
}

std::string ArrayGeometry::to_json() const {
  json j;
  j["positions_m"] = json::array();
  for (const auto &p : positions)
    j["positions_m"].push_back({p.x(), p.y(), p.z()});
  if (!labels.empty()) j["labels"] = labels;
  return j.dump(2);
}

ArrayGeometry ArrayGeometry::from_json(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception &e) {
    throw FormatError(std::string("geometry JSON: ") + e.what());
  }
  if (!j.contains("positions_m") || !j["positions_m"].is_array())
    throw FormatError("geometry JSON missing positions_m array");
  ArrayGeometry g;
  for (const auto &row : j["positions_m"]) {
    if (!row.is_array() || row.size() != 3)
      throw FormatError("positions_m entries must be [x,y,z]");
    g.positions.emplace_back(row[0].get<double>(), row[1].get<double>(),
                             row[2].get<double>());
  }
  if (j.contains("labels")) g.labels = j["labels"].get<std::vector<std::string>>();
  g.validate();
  return g;
}

FrequencyGrid::FrequencyGrid(double fs, uint32_t nfft, double c)
    : sample_rate(fs), fft_size(nfft), speed_of_sound(c) {
  if (!(fs > 0.0)) throw InvalidArgument("sample rate must be > 0");
  if (nfft < 2 || nfft % 2 != 0)
    throw InvalidArgument("fft size must be even and >= 2");
  if (!(c > 0.0)) throw InvalidArgument("speed of sound must be > 0");
}

double FrequencyGrid::bin_hz(uint32_t k) const {
  if (k > fft_size / 2) throw InvalidArgument("bin index out of range");
  return static_cast<double>(k) * sample_rate / fft_size;
}

double FrequencyGrid::wavenumber(double freq_hz) const {
  return 2.0 * std::numbers::pi * freq_hz / speed_of_sound;
}

uint64_t FrequencyGrid::content_hash() const {
  uint64_t h = fnv1a(&sample_rate, sizeof sample_rate);
  h = fnv1a(&fft_size, sizeof fft_size, h);
  h = fnv1a(&speed_of_sound, sizeof speed_of_sound, h);
  return h;
}

ComplexPressure plane_wave_pressure(double p0, double freq_hz,
                                    const FrequencyGrid &grid,
                                    const Direction &dir,
                                    const Eigen::Vector3d &pos) {
  if (!std::isfinite(p0) || !std::isfinite(freq_hz) || !pos.allFinite())
    throw InvalidArgument("plane_wave_pressure: non-finite input");
  if (freq_hz < 0.0) throw InvalidArgument("frequency must be >= 0");
  // -j k u_prop . r with u_prop = -u_arrival, i.e. +j k u_arrival . r.
  double phase = grid.wavenumber(freq_hz) * dir.unit().dot(pos);
  return std::polar(p0, phase);
}

Eigen::VectorXcd steering_vector(const ArrayGeometry &geom, double freq_hz,
                                 const FrequencyGrid &grid,
                                 const Direction &dir) {
  geom.validate();
  Eigen::VectorXcd v(geom.size());
  for (size_t m = 0; m < geom.size(); ++m)
    v(static_cast<Eigen::Index>(m)) =
        plane_wave_pressure(1.0, freq_hz, grid, dir, geom.positions[m]);
  return v;
}

}  // namespace wavefield
