// include/wavefield/wav.h

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

#include <string>

#include <Eigen/Dense>

namespace wavefield {

// Reads 16-bit PCM, 32-bit IEEE float, or extensible WAV. Returns samples x
// channels; PCM is scaled to [-1, 1) by 1/32768.
Eigen::MatrixXd read_wav(const std::string &path, double *sample_rate);

// Writes 32-bit IEEE float WAV (format tag 3 plus fact chunk).
void write_wav(const std::string &path, const Eigen::MatrixXd &samples,
               double sample_rate);

}  // namespace wavefield
