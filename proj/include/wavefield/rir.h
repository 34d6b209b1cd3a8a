// include/wavefield/rir.h

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

#include "wavefield/stft.h"

namespace wavefield {

// Welch accumulators for transfer-function estimation. Sums (not means) are
// stored with the frame count so that partial accumulations merge exactly;
// the count cancels in the spectral ratio.
struct CrossSpectra {
  StftConfig config;  // adopted from the first accumulation
  uint32_t bins = 0;
  uint32_t channels = 0;
  uint64_t frame_count = 0;
  std::vector<double> sxx_sum;                  // per bin, |x|^2
  std::vector<std::complex<double>> sxy_sum;    // [f][m], conj(x) * y

  bool empty() const { return frame_count == 0; }
};

// Folds the per-frame outer products of a 1-channel source spectrum and an
// M-channel observation spectrum into `cross`.
void accumulate(CrossSpectra &cross, const SpectralTensor &x_spec,
                const SpectralTensor &y_spec);

// Exact merge of two accumulations over disjoint frame sets.
CrossSpectra merged(const CrossSpectra &a, const CrossSpectra &b);

struct TransferFunction {
  double sample_rate = 0.0;
  uint32_t fft_size = 0;
  uint32_t bins = 0;
  uint32_t channels = 0;
  std::vector<std::complex<double>> h;  // [f][m]
  std::vector<uint8_t> reliable;        // per bin; 0 = unexcited, forced to 0

  std::complex<double> at(uint32_t f, uint32_t m) const {
    return h[static_cast<size_t>(f) * channels + m];
  }
};

// h(w) = S_xy / (S_xx + eps * max S_xx). Bins with S_xx below 1e-12 of the
// peak are flagged unreliable and zeroed. Throws when nothing was excited.
TransferFunction estimate_rir(const CrossSpectra &cross, double eps = 1e-6);

// Per cell: y(t,w) = h(w) * u(t,w) for a 1-channel source spectrum. Valid
// for responses shorter than one frame (multiplicative STFT model).
SpectralTensor apply_rir(const TransferFunction &tf,
                         const SpectralTensor &u_spec);

// Inverse real FFT per channel, truncated to `length` samples (rows), one
// column per channel. length must not exceed fft_size.
Eigen::MatrixXd to_impulse_response(const TransferFunction &tf,
                                    uint32_t length);

// Container: magic "RIR1", u32 header length, JSON header (rates, dims,
// reliability flags), then bins x channels complex64 in [f][m] order.
void save_rir(const TransferFunction &tf, const std::string &path);
TransferFunction load_rir(const std::string &path);

}  // namespace wavefield
