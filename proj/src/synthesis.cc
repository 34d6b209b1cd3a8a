// src/synthesis.cc

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

#include "wavefield/synthesis.h"

#include "wavefield/error.h"

namespace wavefield {

SpectralTensor synthesize_field(const TimeFrequencyMap &map,
                                const DeviceDictionary &dict,
                                const StftConfig &cfg) {
  cfg.validate();
  if (map.grid_hash != dict.grid.content_hash())
    throw InvalidArgument(
        "map grid differs from dictionary grid; atom indices are not "
        "transferable");
  if (map.freq_hash != dict.freqs.content_hash())
    throw InvalidArgument("map frequency grid differs from dictionary");
  if (cfg.frame_size != dict.freqs.fft_size ||
      cfg.sample_rate != dict.freqs.sample_rate)
    throw DimensionMismatch("STFT config does not match dictionary");
  if (map.bins != cfg.bin_count())
    throw DimensionMismatch("map bins do not match frame_size/2 + 1");

  const auto M = static_cast<uint32_t>(dict.num_mics());
  SpectralTensor out(cfg, map.frames, map.bins, M);
  for (uint32_t t = 0; t < map.frames; ++t)
    for (uint32_t f = 0; f < map.bins; ++f) {
      const auto &cell = map.cell(t, f);
      if (cell.empty()) continue;
      ptrdiff_t slot = dict.bin_slot(f);
      if (slot < 0)
        throw InvalidArgument("map cell at a bin the dictionary lacks");
      std::complex<double> *dst = out.cell(t, f);
      for (const auto &atom : cell) {
        if (atom.index >= dict.num_directions())
          throw InvalidArgument("atom index outside dictionary grid");
        for (uint32_t m = 0; m < M; ++m)
          dst[m] += atom.weight * std::complex<double>(dict.at(
                        static_cast<size_t>(slot), atom.index, m));
      }
    }
  return out;
}

SpectralTensor add_noise(const SpectralTensor &field,
                         const SpectralTensor &noise, double gain) {
  if (field.frames != noise.frames || field.bins != noise.bins ||
      field.channels != noise.channels)
    throw DimensionMismatch("noise dimensions do not match field");
  if (!(field.config == noise.config))
    throw DimensionMismatch("noise STFT config does not match field");
  SpectralTensor out = field;
  for (size_t i = 0; i < out.data.size(); ++i)
    out.data[i] += gain * noise.data[i];
  return out;
}

Eigen::MatrixXd render(const TimeFrequencyMap &map,
                       const DeviceDictionary &dict, const StftConfig &cfg,
                       const NoiseMap *noise, double noise_gain) {
  SpectralTensor field = synthesize_field(map, dict, cfg);
  if (noise) {
    if (const auto *tensor = std::get_if<SpectralTensor>(noise)) {
      field = add_noise(field, *tensor, noise_gain);
    } else {
      const auto &noise_map = std::get<TimeFrequencyMap>(*noise);
      field = add_noise(field, synthesize_field(noise_map, dict, cfg),
                        noise_gain);
    }
  }
  return istft(field, cfg);
}

}  // namespace wavefield
