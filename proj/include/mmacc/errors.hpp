// Copyright 2026 The MMACC Authors
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

#ifndef MMACC_ERRORS_HPP_
#define MMACC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mmacc {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Composing PLDs defined on different grids.
class GridMismatchError : public Error {
 public:
  explicit GridMismatchError(const std::string& msg) : Error(msg) {}
};

// Requested delta is below the infinity mass; no finite epsilon exists.
class UnachievableError : public Error {
 public:
  explicit UnachievableError(const std::string& msg) : Error(msg) {}
};

// Query outside the open range of an invertible function.
class OutOfRangeError : public Error {
 public:
  explicit OutOfRangeError(const std::string& msg) : Error(msg) {}
};

// Encoder matrix violates a structural precondition.
class InvalidMatrixError : public Error {
 public:
  explicit InvalidMatrixError(const std::string& msg) : Error(msg) {}
};

// Matrix entry parsed from CSV is negative.
class NegativeEntryError : public InvalidMatrixError {
 public:
  explicit NegativeEntryError(const std::string& msg)
      : InvalidMatrixError(msg) {}
};

// Malformed input file; message carries row/column location.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

class NotPowerOfTwoError : public Error {
 public:
  explicit NotPowerOfTwoError(const std::string& msg) : Error(msg) {}
};

class DivisibilityError : public Error {
 public:
  explicit DivisibilityError(const std::string& msg) : Error(msg) {}
};

}  // namespace mmacc

#endif  // MMACC_ERRORS_HPP_
