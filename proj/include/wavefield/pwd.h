// include/wavefield/pwd.h

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

#include "wavefield/dictionary.h"
#include "wavefield/stft.h"

namespace wavefield {

struct DecompositionConfig {
  uint32_t max_atoms = 30;
  double residual_stop_db = -30.0;
  double min_correlation = 1e-12;
  double bin_lo_hz = 50.0;
  double bin_hi_hz = 8000.0;
  // Reserved for a convex solver mode; the pursuit path ignores it.
  double lasso_lambda = 0.0;

  void validate() const;
};

// Sparse per-cell expansion of a capture: for each (frame, bin) the active
// direction indices and complex weights, tied to the generating grids by
// content hash.
struct TimeFrequencyMap {
  struct Atom {
    uint32_t index;
    std::complex<double> weight;
  };

  uint64_t grid_hash = 0;
  uint64_t freq_hash = 0;
  uint32_t frames = 0;
  uint32_t bins = 0;
  DecompositionConfig config;
  std::vector<std::vector<Atom>> cells;  // t * bins + f

  std::vector<Atom> &cell(uint32_t t, uint32_t f) {
    return cells[static_cast<size_t>(t) * bins + f];
  }
  const std::vector<Atom> &cell(uint32_t t, uint32_t f) const {
    return cells[static_cast<size_t>(t) * bins + f];
  }

  void validate() const;
};

// Result of one greedy pursuit. residual_energy_trace[k] is ||r||^2 after
// k+1 accepted atoms, so a single max_atoms=N run also yields the residual
// of every smaller budget (the active set grows by appending).
struct CellDecomposition {
  std::vector<uint32_t> indices;
  std::vector<std::complex<double>> weights;
  double residual_db = 0.0;  // -inf for a zero input
  std::vector<double> residual_energy_trace;
};

// Greedy pursuit on one cell: columns are normalized once for selection,
// argmax |<residual, column>| with ties to the lowest index, full
// least-squares refit over the active set each step (weights returned at
// raw-atom scale). Stops at max_atoms, residual_db <= residual_stop_db, best
// correlation < min_correlation, or a rank-deficient active set (the newest
// atom is dropped).
CellDecomposition decompose_cell(const Eigen::VectorXcd &y,
                                 const Eigen::MatrixXcd &atoms,
                                 const DecompositionConfig &cfg);

// Cell-wise pursuit over every dictionary bin inside the configured range.
// Data-parallel over bins; results are identical for any job count.
TimeFrequencyMap decompose(const SpectralTensor &spec,
                           const DeviceDictionary &dict,
                           const DecompositionConfig &cfg, int jobs = 0);

// Residual-to-observed energy ratio in dB (floored at -120), per bin and
// aggregated over bins that carry signal energy.
struct GoaReport {
  std::vector<uint32_t> bin_indices;
  std::vector<double> bin_db;
  double aggregate_db = 0.0;
};

GoaReport goa(const TimeFrequencyMap &map, const DeviceDictionary &dict,
              const SpectralTensor &spec);

// Map container: magic "TFM1", u32 header length, JSON header (dims, grid
// and frequency hashes, config, cell count), then per nonempty cell in
// (t, f) order: u32 t, u32 f, u32 count, count x (u32 index, complex64).
void save_map(const TimeFrequencyMap &map, const std::string &path);
TimeFrequencyMap load_map(const std::string &path);

}  // namespace wavefield
