// src/io_util.cc

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

#include "wavefield/io_util.h"

#include <cstring>

#include "wavefield/error.h"

namespace wavefield {

void write_bytes(std::ostream &os, const void *data, size_t n) {
  os.write(static_cast<const char *>(data), static_cast<std::streamsize>(n));
  if (!os) throw IoError("write failed");
}

void write_u32(std::ostream &os, uint32_t v) { write_bytes(os, &v, sizeof v); }
void write_u64(std::ostream &os, uint64_t v) { write_bytes(os, &v, sizeof v); }
void write_f32(std::ostream &os, float v) { write_bytes(os, &v, sizeof v); }
void write_f64(std::ostream &os, double v) { write_bytes(os, &v, sizeof v); }

void read_exact(std::istream &is, void *data, size_t n) {
  is.read(static_cast<char *>(data), static_cast<std::streamsize>(n));
  if (static_cast<size_t>(is.gcount()) != n)
    throw TruncatedFile("unexpected end of file");
}

uint32_t read_u32(std::istream &is) {
  uint32_t v;
  read_exact(is, &v, sizeof v);
  return v;
}

uint64_t read_u64(std::istream &is) {
  uint64_t v;
  read_exact(is, &v, sizeof v);
  return v;
}

float read_f32(std::istream &is) {
  float v;
  read_exact(is, &v, sizeof v);
  return v;
}

double read_f64(std::istream &is) {
  double v;
  read_exact(is, &v, sizeof v);
  return v;
}

uint64_t fnv1a(const void *data, size_t n, uint64_t seed) {
  const auto *p = static_cast<const unsigned char *>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace wavefield
