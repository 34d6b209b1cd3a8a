// src/roomsim.cc

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

#include "wavefield/roomsim.h"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "wavefield/error.h"
#include "wavefield/parallel.h"

namespace wavefield {

using json = nlohmann::json;

void RoomSpec::validate() const {
  for (int i = 0; i < 3; ++i)
    if (!(dimensions[i] > 0.0))
      throw InvalidArgument("room dimensions must be > 0");
  for (double b : reflection)
    if (!(b >= 0.0) || !(b <= 1.0))
      throw InvalidArgument("reflection coefficients must lie in [0, 1]");
  if (max_order < 0) throw InvalidArgument("max_order must be >= 0");
  for (int i = 0; i < 3; ++i) {
    if (!(source_pos[i] > 0.0) || !(source_pos[i] < dimensions[i]))
      throw InvalidArgument("source must be strictly inside the room");
    if (!(receiver_origin[i] > 0.0) || !(receiver_origin[i] < dimensions[i]))
      throw InvalidArgument("receiver must be strictly inside the room");
  }
  if (!(sample_rate > 0.0)) throw InvalidArgument("sample rate must be > 0");
  if (!(speed_of_sound > 0.0))
    throw InvalidArgument("speed of sound must be > 0");
}

std::string RoomSpec::to_json() const {
  json j;
  j["dimensions_m"] = {dimensions.x(), dimensions.y(), dimensions.z()};
  j["reflection"] = reflection;
  j["max_order"] = max_order;
  j["source_pos_m"] = {source_pos.x(), source_pos.y(), source_pos.z()};
  j["receiver_origin_m"] = {receiver_origin.x(), receiver_origin.y(),
                            receiver_origin.z()};
  j["sample_rate"] = sample_rate;
  j["speed_of_sound"] = speed_of_sound;
  return j.dump(2);
}

RoomSpec RoomSpec::from_json(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception &e) {
    throw FormatError(std::string("room JSON: ") + e.what());
  }
  RoomSpec room;
  try {
    auto v3 = [](const json &a) {
      return Eigen::Vector3d(a.at(0).get<double>(), a.at(1).get<double>(),
                             a.at(2).get<double>());
    };
    room.dimensions = v3(j.at("dimensions_m"));
    auto refl = j.at("reflection").get<std::vector<double>>();
    if (refl.size() != 6)
      throw FormatError("reflection must list 6 wall coefficients");
    std::copy(refl.begin(), refl.end(), room.reflection.begin());
    room.max_order = j.at("max_order").get<int>();
    room.source_pos = v3(j.at("source_pos_m"));
    room.receiver_origin = v3(j.at("receiver_origin_m"));
    if (j.contains("sample_rate"))
      room.sample_rate = j.at("sample_rate").get<double>();
    if (j.contains("speed_of_sound"))
      room.speed_of_sound = j.at("speed_of_sound").get<double>();
  } catch (const json::exception &e) {
    throw FormatError(std::string("room JSON: ") + e.what());
  }
  room.validate();
  return room;
}

std::vector<ImageSource> image_sources(const RoomSpec &room) {
  room.validate();
  std::vector<ImageSource> images;
  const int order = room.max_order;
  // Image lattice: coordinate (1-2q_i) s_i + 2 n_i L_i reflects |n_i - q_i|
  // times in wall i at 0 and |n_i| times in wall i at L_i.
  for (int nx = -order; nx <= order; ++nx)
    for (int ny = -order; ny <= order; ++ny)
      for (int nz = -order; nz <= order; ++nz)
        for (int qx = 0; qx <= 1; ++qx)
          for (int qy = 0; qy <= 1; ++qy)
            for (int qz = 0; qz <= 1; ++qz) {
              const int n[3] = {nx, ny, nz};
              const int q[3] = {qx, qy, qz};
              int bounces = 0;
              for (int i = 0; i < 3; ++i)
                bounces += std::abs(n[i] - q[i]) + std::abs(n[i]);
              if (bounces > order) continue;
              Eigen::Vector3d pos;
              double amp = 1.0;
              for (int i = 0; i < 3; ++i) {
                pos[i] = (1.0 - 2.0 * q[i]) * room.source_pos[i] +
                         2.0 * n[i] * room.dimensions[i];
                amp *= std::pow(room.reflection[2 * i],
                                std::abs(n[i] - q[i])) *
                       std::pow(room.reflection[2 * i + 1], std::abs(n[i]));
              }
              images.push_back({pos, amp});
            }
  return images;
}

Eigen::MatrixXd simulate_capture(const RoomSpec &room,
                                 const ArrayGeometry &geom,
                                 const Eigen::VectorXd &source, int jobs) {
  room.validate();
  geom.validate();
  if (source.size() == 0) throw InvalidArgument("empty source signal");

  const std::vector<ImageSource> images = image_sources(room);
  const auto len = source.size();
  const auto M = geom.size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(len, static_cast<Eigen::Index>(M));

  // 32-tap Hann-windowed sinc centered on the continuous delay.
  constexpr int kHalf = 16;
  parallel_for(M, jobs, [&](size_t m) {
    const Eigen::Vector3d mic = room.receiver_origin + geom.positions[m];
    double *dst = out.col(static_cast<Eigen::Index>(m)).data();
    for (const auto &img : images) {
      const double dist = (img.position - mic).norm();
      if (dist < 1e-3)
        throw InvalidArgument("image source within 1 mm of a microphone");
      const double gain = img.amplitude /
                          (4.0 * std::numbers::pi * dist);
      const double delay = dist / room.speed_of_sound * room.sample_rate;
      const auto base = static_cast<Eigen::Index>(std::floor(delay));
      const double frac = delay - static_cast<double>(base);
      double taps[2 * kHalf];
      for (int o = -kHalf + 1; o <= kHalf; ++o) {
        const double x = o - frac;  // in (-16, 16]
        const double sinc =
            x == 0.0 ? 1.0
                     : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
        const double window = 0.5 * (1.0 + std::cos(std::numbers::pi * x /
                                                    kHalf));
        taps[o + kHalf - 1] = gain * sinc * window;
      }
      for (Eigen::Index n = 0; n < len; ++n) {
        const double s = source(n);
        if (s == 0.0) continue;
        for (int o = -kHalf + 1; o <= kHalf; ++o) {
          const Eigen::Index idx = n + base + o;
          if (idx >= 0 && idx < len) dst[idx] += s * taps[o + kHalf - 1];
        }
      }
    }
  });
  return out;
}

TimeFrequencyMap GroundTruthScene::to_map(const DeviceDictionary &dict,
                                          const DecompositionConfig &cfg) const {
  TimeFrequencyMap map;
  map.grid_hash = dict.grid.content_hash();
  map.freq_hash = dict.freqs.content_hash();
  map.frames = frames;
  map.bins = bins;
  map.config = cfg;
  map.cells = cells;
  map.validate();
  return map;
}

SpectralTensor generate_scene(const GroundTruthScene &truth,
                              const DeviceDictionary &dict,
                              const StftConfig &cfg) {
  cfg.validate();
  if (cfg.frame_size != dict.freqs.fft_size ||
      cfg.sample_rate != dict.freqs.sample_rate)
    throw DimensionMismatch("STFT config does not match dictionary");
  if (truth.bins != cfg.bin_count())
    throw DimensionMismatch("scene bins do not match frame_size/2 + 1");
  if (truth.cells.size() != static_cast<size_t>(truth.frames) * truth.bins)
    throw DimensionMismatch("scene cell table does not match frames x bins");

  const auto M = static_cast<uint32_t>(dict.num_mics());
  SpectralTensor out(cfg, truth.frames, truth.bins, M);
  for (uint32_t t = 0; t < truth.frames; ++t)
    for (uint32_t f = 0; f < truth.bins; ++f) {
      const auto &cell = truth.cell(t, f);
      if (cell.empty()) continue;
      const ptrdiff_t slot = dict.bin_slot(f);
      if (slot < 0)
        throw InvalidArgument("scene cell at a bin the dictionary lacks");
      std::complex<double> *dst = out.cell(t, f);
      for (const auto &atom : cell) {
        if (atom.index >= dict.num_directions())
          throw InvalidArgument("scene atom index outside dictionary grid");
        for (uint32_t m = 0; m < M; ++m)
          dst[m] += atom.weight * std::complex<double>(dict.at(
                        static_cast<size_t>(slot), atom.index, m));
      }
    }
  return out;
}

}  // namespace wavefield
