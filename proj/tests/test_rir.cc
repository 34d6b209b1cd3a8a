// tests/test_rir.cc

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

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include <doctest.h>

#include "wavefield/error.h"
#include "wavefield/rir.h"
#include "wavefield/stft.h"

using namespace wavefield;

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

std::string temp_path(const char *stem) {
  return std::string("/tmp/wavefield_test_") + stem + "_" +
         std::to_string(::getpid());
}

Eigen::VectorXd white_noise(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = dist(rng);
  return x;
}

Eigen::VectorXd convolve_fir(const Eigen::VectorXd &x,
                             const Eigen::VectorXd &h) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
  for (int n = 0; n < x.size(); ++n)
    for (int k = 0; k <= std::min<int>(n, static_cast<int>(h.size()) - 1); ++k)
      y(n) += h(k) * x(n - k);
  return y;
}

StftConfig config(uint32_t frame) {
  StftConfig cfg;
  cfg.frame_size = frame;
  cfg.hop = frame / 2;
  return cfg;
}

CrossSpectra estimate_input(const Eigen::VectorXd &x, const Eigen::MatrixXd &y,
                            uint32_t frame) {
  CrossSpectra cross;
  accumulate(cross, stft(x, config(frame)), stft(y, config(frame)));
  return cross;
}

}  // namespace

TEST_CASE("identity channel estimates a flat response") {
  const Eigen::VectorXd x = white_noise(16000 * 4, 31);
  const TransferFunction tf = estimate_rir(estimate_input(x, x, 1024));
  REQUIRE(tf.channels == 1);
  REQUIRE(tf.bins == 513);
  int reliable = 0;
  for (uint32_t f = 1; f < 512; ++f)
    if (tf.reliable[f]) {
      CHECK(std::abs(tf.at(f, 0) - cd(1.0, 0.0)) <= 1e-3);
      ++reliable;
    }
  CHECK(reliable > 500);

  const Eigen::MatrixXd ir = to_impulse_response(tf, 64);
  CHECK(ir(0, 0) == doctest::Approx(1.0).epsilon(1e-3));
  for (int n = 1; n < 64; ++n) CHECK(std::abs(ir(n, 0)) <= 1e-2);
}

TEST_CASE("pure delay estimates a linear phase and shifted impulse") {
  const int d = 5;
  const Eigen::VectorXd x = white_noise(16000 * 4, 33);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
  y.tail(x.size() - d) = x.head(x.size() - d);
  const TransferFunction tf = estimate_rir(estimate_input(x, y, 1024));
  for (uint32_t f = 1; f < 512; f += 17) {
    if (!tf.reliable[f]) continue;
    const cd expect = std::polar(1.0, -2.0 * kPi * f * d / 1024.0);
    CHECK(std::abs(tf.at(f, 0) - expect) <= 0.03);
  }
  const Eigen::MatrixXd ir = to_impulse_response(tf, 32);
  CHECK(ir(d, 0) == doctest::Approx(1.0).epsilon(0.01));
  for (int n = 0; n < 32; ++n)
    if (n != d) CHECK(std::abs(ir(n, 0)) <= 0.02);
}

TEST_CASE("known FIR is recovered below -30 dB with long frames") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXd h(128);
  for (int i = 0; i < 128; ++i) h(i) = dist(rng);

  const Eigen::VectorXd x = white_noise(16000 * 10, 71);
  const Eigen::VectorXd y = convolve_fir(x, h);
  const TransferFunction tf = estimate_rir(estimate_input(x, y, 4096));
  const Eigen::MatrixXd ir = to_impulse_response(tf, 4096);

  double err = 0.0, ref = h.squaredNorm();
  for (int n = 0; n < 4096; ++n) {
    const double target = n < 128 ? h(n) : 0.0;
    err += (ir(n, 0) - target) * (ir(n, 0) - target);
  }
  CHECK(10.0 * std::log10(err / ref) <= -30.0);
}

TEST_CASE("accumulations over disjoint segments merge exactly") {
  const Eigen::VectorXd x1 = white_noise(16000, 41), x2 = white_noise(16000, 43);
  const Eigen::VectorXd y1 = 0.5 * x1, y2 = 0.5 * x2;

  CrossSpectra seq;
  accumulate(seq, stft(x1, config(1024)), stft(y1, config(1024)));
  accumulate(seq, stft(x2, config(1024)), stft(y2, config(1024)));

  CrossSpectra a, b;
  accumulate(a, stft(x1, config(1024)), stft(y1, config(1024)));
  accumulate(b, stft(x2, config(1024)), stft(y2, config(1024)));
  const CrossSpectra m = merged(a, b);

  REQUIRE(m.frame_count == seq.frame_count);
  for (size_t i = 0; i < seq.sxx_sum.size(); ++i)
    CHECK(m.sxx_sum[i] ==
          doctest::Approx(seq.sxx_sum[i]).epsilon(1e-12));
  for (size_t i = 0; i < seq.sxy_sum.size(); ++i)
    CHECK(std::abs(m.sxy_sum[i] - seq.sxy_sum[i]) <=
          1e-12 * std::abs(seq.sxy_sum[i]) + 1e-15);

  // The channel itself comes out at both routes.
  const TransferFunction tf = estimate_rir(m);
  for (uint32_t f = 10; f < 500; f += 31)
    if (tf.reliable[f]) CHECK(std::abs(tf.at(f, 0) - cd(0.5, 0.0)) <= 1e-6);
}

TEST_CASE("unexcited bins are flagged and zeroed") {
  const StftConfig cfg = config(256);
  SpectralTensor x_spec(cfg, 4, 129, 1), y_spec(cfg, 4, 129, 1);
  for (uint32_t t = 0; t < 4; ++t)
    for (uint32_t f = 0; f < 40; ++f) {
      x_spec.at(t, f, 0) = cd(1.0, 0.5 * t);
      y_spec.at(t, f, 0) = cd(0.0, 2.0) * x_spec.at(t, f, 0);
    }
  CrossSpectra cross;
  accumulate(cross, x_spec, y_spec);
  const TransferFunction tf = estimate_rir(cross);
  for (uint32_t f = 0; f < 40; ++f) {
    CHECK(tf.reliable[f] == 1);
    CHECK(std::abs(tf.at(f, 0) - cd(0.0, 2.0)) <= 1e-5);
  }
  for (uint32_t f = 40; f < 129; ++f) {
    CHECK(tf.reliable[f] == 0);
    CHECK(tf.at(f, 0) == cd(0.0, 0.0));
  }

  CrossSpectra empty_cross;
  accumulate(empty_cross, SpectralTensor(cfg, 2, 129, 1),
             SpectralTensor(cfg, 2, 129, 1));
  CHECK_THROWS_AS(estimate_rir(empty_cross), InvalidArgument);
}

TEST_CASE("applying a response multiplies each cell") {
  const StftConfig cfg = config(256);
  TransferFunction tf;
  tf.sample_rate = 16000.0;
  tf.fft_size = 256;
  tf.bins = 129;
  tf.channels = 2;
  tf.h.resize(129 * 2);
  tf.reliable.assign(129, 1);
  for (uint32_t f = 0; f < 129; ++f) {
    tf.h[f * 2 + 0] = cd(0.5, 0.001 * f);
    tf.h[f * 2 + 1] = cd(-1.0, 0.25);
  }

  SpectralTensor u(cfg, 3, 129, 1);
  std::mt19937_64 rng(55);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (auto &v : u.data) v = cd(dist(rng), dist(rng));

  const SpectralTensor y = apply_rir(tf, u);
  REQUIRE(y.channels == 2);
  REQUIRE(y.frames == 3);
  for (uint32_t t = 0; t < 3; ++t)
    for (uint32_t f = 0; f < 129; ++f)
      for (uint32_t m = 0; m < 2; ++m)
        CHECK(std::abs(y.at(t, f, m) - tf.at(f, m) * u.at(t, f, 0)) <= 1e-15);

  SpectralTensor two_channel(cfg, 3, 129, 2);
  CHECK_THROWS_AS(apply_rir(tf, two_channel), DimensionMismatch);
}

TEST_CASE("estimate then apply reproduces a short FIR channel") {
  std::mt19937_64 rng(19);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXd h(64);
  for (int i = 0; i < 64; ++i) h(i) = dist(rng) * std::exp(-i / 24.0);

  const Eigen::VectorXd x1 = white_noise(16000 * 6, 81);
  const TransferFunction tf =
      estimate_rir(estimate_input(x1, convolve_fir(x1, h), 4096));

  const Eigen::VectorXd x2 = white_noise(16000 * 2, 83);
  const SpectralTensor y_spec = apply_rir(tf, stft(x2, config(4096)));
  const Eigen::MatrixXd y = istft(y_spec, config(4096));
  const Eigen::VectorXd want = convolve_fir(x2, h);

  const int lo = 4096, hi = static_cast<int>(y.rows()) - 4096;
  double err = 0.0, ref = 0.0;
  for (int n = lo; n < hi; ++n) {
    err += (y(n, 0) - want(n)) * (y(n, 0) - want(n));
    ref += want(n) * want(n);
  }
  CHECK(10.0 * std::log10(ref / err) >= 20.0);
}

TEST_CASE("impulse response length is bounded by the frame") {
  const Eigen::VectorXd x = white_noise(16000, 91);
  const TransferFunction tf = estimate_rir(estimate_input(x, x, 512));
  CHECK_THROWS_AS(to_impulse_response(tf, 0), InvalidArgument);
  CHECK_THROWS_AS(to_impulse_response(tf, 513), InvalidArgument);
  const Eigen::MatrixXd full = to_impulse_response(tf, 512);
  const Eigen::MatrixXd cut = to_impulse_response(tf, 10);
  REQUIRE(cut.rows() == 10);
  for (int n = 0; n < 10; ++n) CHECK(cut(n, 0) == full(n, 0));
}

TEST_CASE("response file round trip keeps values at single precision") {
  const Eigen::VectorXd x = white_noise(16000 * 2, 101);
  Eigen::MatrixXd y(x.size(), 2);
  y.col(0) = 0.25 * x;
  y.col(1) = -0.5 * x;
  const TransferFunction tf = estimate_rir(estimate_input(x, y, 1024));

  const std::string path = temp_path("tf.rir");
  save_rir(tf, path);
  const TransferFunction back = load_rir(path);
  CHECK(back.sample_rate == tf.sample_rate);
  CHECK(back.fft_size == tf.fft_size);
  CHECK(back.bins == tf.bins);
  CHECK(back.channels == tf.channels);
  CHECK(back.reliable == tf.reliable);
  REQUIRE(back.h.size() == tf.h.size());
  for (size_t i = 0; i < tf.h.size(); ++i) {
    CHECK(back.h[i].real() ==
          static_cast<double>(static_cast<float>(tf.h[i].real())));
    CHECK(back.h[i].imag() ==
          static_cast<double>(static_cast<float>(tf.h[i].imag())));
  }
  std::remove(path.c_str());
}

TEST_CASE("response loader rejects damaged files") {
  const Eigen::VectorXd x = white_noise(8192, 103);
  const TransferFunction tf = estimate_rir(estimate_input(x, x, 512));
  const std::string path = temp_path("bad.rir");

  save_rir(tf, path);
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(1);
    f.write("Q", 1);
  }
  CHECK_THROWS_AS(load_rir(path), FormatError);

  save_rir(tf, path);
  {
    std::ifstream in(path, std::ios::binary);
    std::string all((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(all.data(), static_cast<std::streamoff>(all.size() / 2));
  }
  CHECK_THROWS_AS(load_rir(path), TruncatedFile);

  CHECK_THROWS_AS(load_rir("/nonexistent/q.rir"), IoError);
  std::remove(path.c_str());
}
