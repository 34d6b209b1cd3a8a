// include/wavefield/stft.h

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
#include <vector>

#include <Eigen/Dense>

namespace wavefield {

struct StftConfig {
  enum class Window : uint32_t { kHann = 0 };

  uint32_t frame_size = 1024;
  uint32_t hop = 512;
  Window window = Window::kHann;
  double sample_rate = 16000.0;

  uint32_t bin_count() const { return frame_size / 2 + 1; }

  // Throws InvalidArgument unless frame_size is even, hop divides frame_size
  // and the window satisfies constant overlap-add at the hop within 1e-10.
  void validate() const;

  bool operator==(const StftConfig &) const = default;
};

// Periodic Hann, w[n] = 0.5 - 0.5 cos(2 pi n / N); exact COLA at hop N/2.
std::vector<double> make_window(const StftConfig &cfg);

// frames x bins x channels, channel index fastest.
struct SpectralTensor {
  StftConfig config;
  uint32_t frames = 0;
  uint32_t bins = 0;
  uint32_t channels = 0;
  std::vector<std::complex<double>> data;

  SpectralTensor() = default;
  SpectralTensor(const StftConfig &cfg, uint32_t T, uint32_t F, uint32_t M)
      : config(cfg), frames(T), bins(F), channels(M),
        data(static_cast<size_t>(T) * F * M) {}

  std::complex<double> &at(uint32_t t, uint32_t f, uint32_t m) {
    return data[(static_cast<size_t>(t) * bins + f) * channels + m];
  }
  const std::complex<double> &at(uint32_t t, uint32_t f, uint32_t m) const {
    return data[(static_cast<size_t>(t) * bins + f) * channels + m];
  }
  // Contiguous M-vector of one (t, f) cell.
  std::complex<double> *cell(uint32_t t, uint32_t f) {
    return data.data() + (static_cast<size_t>(t) * bins + f) * channels;
  }
  const std::complex<double> *cell(uint32_t t, uint32_t f) const {
    return data.data() + (static_cast<size_t>(t) * bins + f) * channels;
  }
};

// Windowed one-sided FFT of frames [t*hop, t*hop + frame_size) per channel.
// `signal` is samples x channels. Throws InvalidArgument when the signal is
// shorter than one frame.
SpectralTensor stft(const Eigen::MatrixXd &signal, const StftConfig &cfg);

// Weighted overlap-add synthesis; inverse of stft on the interior where the
// window overlap is complete. Output is (T-1)*hop + frame_size samples.
// Throws InvalidArgument when cfg differs from spec.config.
Eigen::MatrixXd istft(const SpectralTensor &spec, const StftConfig &cfg);

}  // namespace wavefield
