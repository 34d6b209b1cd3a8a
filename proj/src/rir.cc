// src/rir.cc

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

#include "wavefield/rir.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include <fftw3.h>
#include <json.hpp>

#include "wavefield/error.h"
#include "wavefield/io_util.h"

namespace wavefield {

using json = nlohmann::json;

void accumulate(CrossSpectra &cross, const SpectralTensor &x_spec,
                const SpectralTensor &y_spec) {
  if (x_spec.channels != 1)
    throw DimensionMismatch("source spectrum must have exactly 1 channel");
  if (x_spec.frames != y_spec.frames || x_spec.bins != y_spec.bins)
    throw DimensionMismatch("source/observation tensors disagree in T or F");
  if (!(x_spec.config == y_spec.config))
    throw DimensionMismatch("source/observation STFT configs differ");

  if (cross.empty()) {
    cross.config = x_spec.config;
    cross.bins = x_spec.bins;
    cross.channels = y_spec.channels;
    cross.sxx_sum.assign(cross.bins, 0.0);
    cross.sxy_sum.assign(static_cast<size_t>(cross.bins) * cross.channels,
                         {0.0, 0.0});
  } else {
    if (!(cross.config == x_spec.config) || cross.bins != x_spec.bins ||
        cross.channels != y_spec.channels)
      throw DimensionMismatch("accumulation does not match existing sums");
  }

  for (uint32_t t = 0; t < x_spec.frames; ++t)
    for (uint32_t f = 0; f < x_spec.bins; ++f) {
      const std::complex<double> x = x_spec.at(t, f, 0);
      cross.sxx_sum[f] += std::norm(x);
      const std::complex<double> xc = std::conj(x);
      const std::complex<double> *y = y_spec.cell(t, f);
      std::complex<double> *dst =
          cross.sxy_sum.data() + static_cast<size_t>(f) * cross.channels;
      for (uint32_t m = 0; m < cross.channels; ++m) dst[m] += xc * y[m];
    }
  cross.frame_count += x_spec.frames;
}

CrossSpectra merged(const CrossSpectra &a, const CrossSpectra &b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (!(a.config == b.config) || a.bins != b.bins ||
      a.channels != b.channels)
    throw DimensionMismatch("cannot merge accumulations of different shape");
  CrossSpectra out = a;
  out.frame_count += b.frame_count;
  for (size_t i = 0; i < out.sxx_sum.size(); ++i)
    out.sxx_sum[i] += b.sxx_sum[i];
  for (size_t i = 0; i < out.sxy_sum.size(); ++i)
    out.sxy_sum[i] += b.sxy_sum[i];
  return out;
}

TransferFunction estimate_rir(const CrossSpectra &cross, double eps) {
  if (cross.empty()) throw InvalidArgument("no frames accumulated");
  if (!(eps >= 0.0)) throw InvalidArgument("eps must be >= 0");

  const double peak =
      *std::max_element(cross.sxx_sum.begin(), cross.sxx_sum.end());
  if (!(peak > 0.0)) throw InvalidArgument("no excitation in any bin");

  TransferFunction tf;
  tf.sample_rate = cross.config.sample_rate;
  tf.fft_size = cross.config.frame_size;
  tf.bins = cross.bins;
  tf.channels = cross.channels;
  tf.h.assign(static_cast<size_t>(cross.bins) * cross.channels, {0.0, 0.0});
  tf.reliable.assign(cross.bins, 0);

  for (uint32_t f = 0; f < cross.bins; ++f) {
    if (cross.sxx_sum[f] < 1e-12 * peak) continue;  // unexcited, left at 0
    tf.reliable[f] = 1;
    const double denom = cross.sxx_sum[f] + eps * peak;
    for (uint32_t m = 0; m < cross.channels; ++m)
      tf.h[static_cast<size_t>(f) * cross.channels + m] =
          cross.sxy_sum[static_cast<size_t>(f) * cross.channels + m] / denom;
  }
  return tf;
}

SpectralTensor apply_rir(const TransferFunction &tf,
                         const SpectralTensor &u_spec) {
  if (u_spec.channels != 1)
    throw DimensionMismatch("source spectrum must have exactly 1 channel");
  if (u_spec.bins != tf.bins)
    throw DimensionMismatch("bin count does not match transfer function");
  if (u_spec.config.frame_size != tf.fft_size ||
      u_spec.config.sample_rate != tf.sample_rate)
    throw DimensionMismatch("STFT config does not match transfer function");

  SpectralTensor out(u_spec.config, u_spec.frames, u_spec.bins, tf.channels);
  for (uint32_t t = 0; t < u_spec.frames; ++t)
    for (uint32_t f = 0; f < u_spec.bins; ++f) {
      const std::complex<double> u = u_spec.at(t, f, 0);
      std::complex<double> *dst = out.cell(t, f);
      for (uint32_t m = 0; m < tf.channels; ++m) dst[m] = tf.at(f, m) * u;
    }
  return out;
}

Eigen::MatrixXd to_impulse_response(const TransferFunction &tf,
                                    uint32_t length) {
  if (length == 0 || length > tf.fft_size)
    throw InvalidArgument("length must be in [1, fft_size]");
  if (tf.bins != tf.fft_size / 2 + 1)
    throw DimensionMismatch("bins inconsistent with fft_size");

  const uint32_t n = tf.fft_size;
  double *real = fftw_alloc_real(n);
  fftw_complex *cplx = fftw_alloc_complex(n / 2 + 1);
  fftw_plan plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), cplx, real,
                                        FFTW_ESTIMATE);
  Eigen::MatrixXd out(length, tf.channels);
  for (uint32_t m = 0; m < tf.channels; ++m) {
    for (uint32_t f = 0; f < tf.bins; ++f) {
      const std::complex<double> v =
          tf.reliable[f] ? tf.at(f, m) : std::complex<double>(0.0, 0.0);
      cplx[f][0] = v.real();
      cplx[f][1] = v.imag();
    }
    fftw_execute(plan);
    for (uint32_t i = 0; i < length; ++i) out(i, m) = real[i] / n;
  }
  fftw_destroy_plan(plan);
  fftw_free(real);
  fftw_free(cplx);
  return out;
}

namespace {
constexpr char kRirMagic[4] = {'R', 'I', 'R', '1'};
}

void save_rir(const TransferFunction &tf, const std::string &path) {
  if (tf.h.size() != static_cast<size_t>(tf.bins) * tf.channels ||
      tf.reliable.size() != tf.bins)
    throw DimensionMismatch("transfer function internally inconsistent");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);

  json header;
  header["sample_rate"] = tf.sample_rate;
  header["fft_size"] = tf.fft_size;
  header["bins"] = tf.bins;
  header["channels"] = tf.channels;
  header["reliable"] = std::vector<int>(tf.reliable.begin(),
                                        tf.reliable.end());
  const std::string header_str = header.dump();

  write_bytes(os, kRirMagic, sizeof kRirMagic);
  write_u32(os, static_cast<uint32_t>(header_str.size()));
  write_bytes(os, header_str.data(), header_str.size());
  for (const auto &v : tf.h) {
    write_f32(os, static_cast<float>(v.real()));
    write_f32(os, static_cast<float>(v.imag()));
  }
  if (!os) throw IoError("write failed: " + path);
}

TransferFunction load_rir(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);

  char magic[4];
  read_exact(is, magic, sizeof magic);
  if (std::memcmp(magic, kRirMagic, sizeof kRirMagic) != 0)
    throw FormatError("not a transfer-function file (bad magic)");

  uint32_t header_len = read_u32(is);
  std::string header_str(header_len, '\0');
  read_exact(is, header_str.data(), header_len);

  TransferFunction tf;
  try {
    json header = json::parse(header_str);
    tf.sample_rate = header.at("sample_rate").get<double>();
    tf.fft_size = header.at("fft_size").get<uint32_t>();
    tf.bins = header.at("bins").get<uint32_t>();
    tf.channels = header.at("channels").get<uint32_t>();
    auto rel = header.at("reliable").get<std::vector<int>>();
    tf.reliable.assign(rel.begin(), rel.end());
  } catch (const json::exception &e) {
    throw FormatError(std::string("transfer-function header: ") + e.what());
  }
  if (tf.reliable.size() != tf.bins)
    throw DimensionMismatch("reliability flags do not match bin count");

  tf.h.resize(static_cast<size_t>(tf.bins) * tf.channels);
  for (auto &v : tf.h) {
    float re = read_f32(is);
    float im = read_f32(is);
    v = {re, im};
  }
  is.peek();
  if (!is.eof()) throw FormatError("trailing bytes after payload");
  return tf;
}

}  // namespace wavefield
