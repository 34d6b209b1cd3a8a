// include/wavefield/error.h

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

#include <stdexcept>
#include <string>

namespace wavefield {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Bad values or inconsistent options supplied by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Unrecognized magic, wrong version, or malformed structure in a file.
class FormatError : public Error {
 public:
  using Error::Error;
};

// File ends before the payload promised by its header.
class TruncatedFile : public Error {
 public:
  using Error::Error;
};

// Header dimensions disagree with each other or with the payload.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A truncated series or iterative routine failed its convergence check.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failure (open, read, write).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace wavefield
