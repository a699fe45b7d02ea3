// Copyright 2026 The cprepair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace cprepair {

// Base for every error raised by the library. Callers that only care about
// "the computation refused its input" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violated: wrong shape, asymmetric matrix, out-of-range scalar.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Input is well-formed but singular where an inverse is required.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// A symplectic eigenvalue reached the pure-state boundary where the Fisher
// weights and c_geom blow up. `depth()` is NaN unless raised along a path.
class NearPurityError : public Error {
 public:
  explicit NearPurityError(const std::string& what, double depth = std::nan(""))
      : Error(what), depth_(depth) {}
  double depth() const noexcept { return depth_; }

 private:
  double depth_;
};

// Fock-space truncation lost too much trace.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, int suggested_cutoff)
      : Error(what), suggested_cutoff_(suggested_cutoff) {}
  int suggested_cutoff() const noexcept { return suggested_cutoff_; }

 private:
  int suggested_cutoff_;
};

// The isotropic closed-form repair was asked to handle a matrix that is not of
// the form a*1 + b*i*sigma. Fall back to minimal_repair.
class WrongFastPathError : public Error {
 public:
  using Error::Error;
};

}  // namespace cprepair
