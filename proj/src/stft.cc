// src/stft.cc

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

#include "wavefield/stft.h"

#include <cmath>
#include <numbers>

#include <fftw3.h>

#include "wavefield/error.h"

namespace wavefield {

namespace {

// FFTW buffers and plans for one transform size. Plan creation is not
// thread-safe, so transforms stay single-threaded; callers parallelize at a
// higher level.
class FftPlan {
 public:
  explicit FftPlan(uint32_t n) : n_(n) {
    real_ = fftw_alloc_real(n);
    cplx_ = fftw_alloc_complex(n / 2 + 1);
    fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_, cplx_,
                                FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), cplx_, real_,
                                FFTW_ESTIMATE);
  }
  ~FftPlan() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(real_);
    fftw_free(cplx_);
  }
  FftPlan(const FftPlan &) = delete;
  FftPlan &operator=(const FftPlan &) = delete;

  double *real() { return real_; }
  fftw_complex *cplx() { return cplx_; }
  void forward() { fftw_execute(fwd_); }
  void inverse() { fftw_execute(inv_); }
  uint32_t size() const { return n_; }

 private:
  uint32_t n_;
  double *real_;
  fftw_complex *cplx_;
  fftw_plan fwd_, inv_;
};

}  // namespace

std::vector<double> make_window(const StftConfig &cfg) {
  std::vector<double> w(cfg.frame_size);
  for (uint32_t n = 0; n < cfg.frame_size; ++n)
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / cfg.frame_size);
  return w;
}

void StftConfig::validate() const {
  if (frame_size < 2 || frame_size % 2 != 0)
    throw InvalidArgument("frame_size must be even and >= 2");
  if (hop == 0 || frame_size % hop != 0)
    throw InvalidArgument("hop must divide frame_size");
  if (!(sample_rate > 0.0)) throw InvalidArgument("sample rate must be > 0");
  // COLA check: the shifted window sum must be constant across one period.
  std::vector<double> w = make_window(*this);
  std::vector<double> acc(hop, 0.0);
  for (uint32_t start = 0; start < frame_size; start += hop)
    for (uint32_t n = 0; n < hop; ++n) acc[n] += w[start + n];
  double lo = acc[0], hi = acc[0];
  for (double v : acc) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi - lo > 1e-10 || !(lo > 0.0))
    throw InvalidArgument("window violates constant overlap-add at this hop");
}

SpectralTensor stft(const Eigen::MatrixXd &signal, const StftConfig &cfg) {
  cfg.validate();
  const auto len = static_cast<uint32_t>(signal.rows());
  const auto channels = static_cast<uint32_t>(signal.cols());
  if (channels == 0) throw InvalidArgument("signal has no channels");
  if (len < cfg.frame_size)
    throw InvalidArgument("signal shorter than one frame");

  const uint32_t T = (len - cfg.frame_size) / cfg.hop + 1;
  const uint32_t F = cfg.bin_count();
  SpectralTensor out(cfg, T, F, channels);
  std::vector<double> w = make_window(cfg);
  FftPlan plan(cfg.frame_size);

  for (uint32_t m = 0; m < channels; ++m) {
    for (uint32_t t = 0; t < T; ++t) {
      const double *src = signal.col(m).data() + static_cast<size_t>(t) * cfg.hop;
      for (uint32_t n = 0; n < cfg.frame_size; ++n)
        plan.real()[n] = src[n] * w[n];
      plan.forward();
      for (uint32_t f = 0; f < F; ++f)
        out.at(t, f, m) = {plan.cplx()[f][0], plan.cplx()[f][1]};
    }
  }
  return out;
}

Eigen::MatrixXd istft(const SpectralTensor &spec, const StftConfig &cfg) {
  cfg.validate();
  if (!(spec.config == cfg))
    throw InvalidArgument("tensor was produced with a different config");
  if (spec.bins != cfg.bin_count())
    throw InvalidArgument("bin count does not match frame_size/2 + 1");
  if (spec.frames == 0 || spec.channels == 0)
    throw InvalidArgument("empty spectral tensor");

  const uint32_t N = cfg.frame_size;
  const size_t out_len = static_cast<size_t>(spec.frames - 1) * cfg.hop + N;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(out_len, spec.channels);
  std::vector<double> w = make_window(cfg);
  std::vector<double> denom(out_len, 0.0);
  for (uint32_t t = 0; t < spec.frames; ++t)
    for (uint32_t n = 0; n < N; ++n)
      denom[static_cast<size_t>(t) * cfg.hop + n] += w[n] * w[n];

  FftPlan plan(N);
  for (uint32_t m = 0; m < spec.channels; ++m) {
    for (uint32_t t = 0; t < spec.frames; ++t) {
      for (uint32_t f = 0; f < spec.bins; ++f) {
        plan.cplx()[f][0] = spec.at(t, f, m).real();
        plan.cplx()[f][1] = spec.at(t, f, m).imag();
      }
      plan.inverse();
      double *dst = out.col(m).data() + static_cast<size_t>(t) * cfg.hop;
      for (uint32_t n = 0; n < N; ++n)
        dst[n] += plan.real()[n] / N * w[n];
    }
    for (size_t n = 0; n < out_len; ++n)
      out(static_cast<Eigen::Index>(n), m) =
          denom[n] > 1e-12 ? out(static_cast<Eigen::Index>(n), m) / denom[n]
                           : 0.0;
  }
  return out;
}

}  // namespace wavefield
