// include/wavefield/synthesis.h

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

#include <variant>

#include "wavefield/dictionary.h"
#include "wavefield/pwd.h"
#include "wavefield/stft.h"

namespace wavefield {

// Background noise, either ready-made spectra for the target device or a map
// to be rendered through the target dictionary.
using NoiseMap = std::variant<SpectralTensor, TimeFrequencyMap>;

// Per cell: sum over active atoms of weight * dictionary column. The map's
// grid hash must equal the dictionary's; atom indices are never re-mapped
// between grids. Bins without dictionary coverage stay zero.
SpectralTensor synthesize_field(const TimeFrequencyMap &map,
                                const DeviceDictionary &dict,
                                const StftConfig &cfg);

// field + gain * noise, elementwise.
SpectralTensor add_noise(const SpectralTensor &field,
                         const SpectralTensor &noise, double gain);

// synthesize_field, optional noise, inverse STFT.
Eigen::MatrixXd render(const TimeFrequencyMap &map,
                       const DeviceDictionary &dict, const StftConfig &cfg,
                       const NoiseMap *noise = nullptr,
                       double noise_gain = 1.0);

}  // namespace wavefield
