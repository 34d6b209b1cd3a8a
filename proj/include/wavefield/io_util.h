// include/wavefield/io_util.h

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

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

namespace wavefield {

// All container formats are little-endian on disk.
static_assert(std::endian::native == std::endian::little,
              "big-endian hosts need byte swapping that is not implemented");

void write_u32(std::ostream &os, uint32_t v);
void write_u64(std::ostream &os, uint64_t v);
void write_f32(std::ostream &os, float v);
void write_f64(std::ostream &os, double v);
void write_bytes(std::ostream &os, const void *data, size_t n);

// Readers throw TruncatedFile when the stream ends mid-value.
uint32_t read_u32(std::istream &is);
uint64_t read_u64(std::istream &is);
float read_f32(std::istream &is);
double read_f64(std::istream &is);
void read_exact(std::istream &is, void *data, size_t n);

// FNV-1a over raw bytes; used for grid / frequency-config identity.
uint64_t fnv1a(const void *data, size_t n, uint64_t seed = 14695981039346656037ull);

}  // namespace wavefield
