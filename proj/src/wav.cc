// src/wav.cc

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

#include "wavefield/wav.h"

#include <cstring>
#include <fstream>
#include <vector>

#include "wavefield/error.h"
#include "wavefield/io_util.h"

namespace wavefield {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t read_u16(std::istream &is) {
  uint16_t v;
  read_exact(is, &v, sizeof v);
  return v;
}

void write_u16(std::ostream &os, uint16_t v) { write_bytes(os, &v, sizeof v); }

void write_tag(std::ostream &os, const char tag[4]) {
  write_bytes(os, tag, 4);
}

}  // namespace

Eigen::MatrixXd read_wav(const std::string &path, double *sample_rate) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);

  char tag[4];
  read_exact(is, tag, 4);
  if (std::memcmp(tag, "RIFF", 4) != 0) throw FormatError("not a RIFF file");
  read_u32(is);  // RIFF size, unreliable in the wild; chunks are walked instead
  read_exact(is, tag, 4);
  if (std::memcmp(tag, "WAVE", 4) != 0) throw FormatError("not a WAVE file");

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  bool have_fmt = false;
  std::vector<char> payload;

  while (is.peek(), !is.eof()) {
    char ck[4];
    is.read(ck, 4);
    if (is.gcount() == 0) break;
    if (is.gcount() != 4) throw TruncatedFile("partial chunk header");
    uint32_t size = read_u32(is);
    if (std::memcmp(ck, "fmt ", 4) == 0) {
      if (size < 16) throw FormatError("fmt chunk too small");
      format = read_u16(is);
      channels = read_u16(is);
      rate = read_u32(is);
      read_u32(is);  // byte rate
      read_u16(is);  // block align
      bits = read_u16(is);
      uint32_t consumed = 16;
      if (format == kFormatExtensible) {
        if (size < 40) throw FormatError("extensible fmt chunk too small");
        read_u16(is);  // cbSize
        read_u16(is);  // valid bits
        read_u32(is);  // channel mask
        format = read_u16(is);  // first two GUID bytes carry the format code
        char guid_rest[14];
        read_exact(is, guid_rest, sizeof guid_rest);
        consumed = 40;
      }
      is.seekg(size - consumed + (size % 2), std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(ck, "data", 4) == 0) {
      payload.resize(size);
      read_exact(is, payload.data(), size);
      if (size % 2) is.seekg(1, std::ios::cur);
    } else {
      is.seekg(size + (size % 2), std::ios::cur);
    }
  }

  if (!have_fmt) throw FormatError("missing fmt chunk");
  if (payload.empty()) throw FormatError("missing data chunk");
  if (channels == 0) throw FormatError("zero channels");
  if (sample_rate) *sample_rate = rate;

  size_t bytes_per = bits / 8;
  if (bytes_per == 0 || payload.size() % (bytes_per * channels) != 0)
    throw FormatError("data chunk size inconsistent with fmt");
  size_t frames = payload.size() / (bytes_per * channels);
  Eigen::MatrixXd out(frames, channels);

  if (format == kFormatPcm && bits == 16) {
    const auto *p = reinterpret_cast<const int16_t *>(payload.data());
    for (size_t n = 0; n < frames; ++n)
      for (size_t c = 0; c < channels; ++c)
        out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c)) =
            p[n * channels + c] / 32768.0;
  } else if (format == kFormatFloat && bits == 32) {
    const auto *p = reinterpret_cast<const float *>(payload.data());
    for (size_t n = 0; n < frames; ++n)
      for (size_t c = 0; c < channels; ++c)
        out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c)) =
            p[n * channels + c];
  } else {
    throw FormatError("unsupported WAV encoding (format " +
                      std::to_string(format) + ", " + std::to_string(bits) +
                      " bits)");
  }
  return out;
}

void write_wav(const std::string &path, const Eigen::MatrixXd &samples,
               double sample_rate) {
  if (samples.cols() < 1 || samples.rows() < 1)
    throw InvalidArgument("empty signal");
  if (!(sample_rate > 0.0)) throw InvalidArgument("sample rate must be > 0");

  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);

  const auto channels = static_cast<uint32_t>(samples.cols());
  const auto frames = static_cast<uint32_t>(samples.rows());
  const uint32_t rate = static_cast<uint32_t>(sample_rate);
  const uint32_t data_bytes = frames * channels * 4;
  // RIFF size covers WAVE + fmt(16+8) + fact(4+8) + data header + payload.
  const uint32_t riff_size = 4 + 24 + 12 + 8 + data_bytes;

  write_tag(os, "RIFF");
  write_u32(os, riff_size);
  write_tag(os, "WAVE");

  write_tag(os, "fmt ");
  write_u32(os, 16);
  write_u16(os, kFormatFloat);
  write_u16(os, static_cast<uint16_t>(channels));
  write_u32(os, rate);
  write_u32(os, rate * channels * 4);
  write_u16(os, static_cast<uint16_t>(channels * 4));
  write_u16(os, 32);

  write_tag(os, "fact");
  write_u32(os, 4);
  write_u32(os, frames);

  write_tag(os, "data");
  write_u32(os, data_bytes);
  std::vector<float> row(channels);
  for (uint32_t n = 0; n < frames; ++n) {
    for (uint32_t c = 0; c < channels; ++c)
      row[c] = static_cast<float>(
          samples(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c)));
    write_bytes(os, row.data(), row.size() * sizeof(float));
  }
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace wavefield
