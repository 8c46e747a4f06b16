// Copyright 2026 The hhl-nopost Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hhl {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &what) : std::runtime_error(what) {}
};

class DimMismatchError : public Error {
  public:
    explicit DimMismatchError(const std::string &what) : Error(what) {}
};

class NotHermitianError : public Error {
  public:
    explicit NotHermitianError(const std::string &what) : Error(what) {}
};

class NotUnitaryError : public Error {
  public:
    explicit NotUnitaryError(const std::string &what) : Error(what) {}
};

class NoConvergenceError : public Error {
  public:
    explicit NoConvergenceError(const std::string &what) : Error(what) {}
};

class SizeOverflowError : public Error {
  public:
    explicit SizeOverflowError(const std::string &what) : Error(what) {}
};

class SingularMatrixError : public Error {
  public:
    explicit SingularMatrixError(const std::string &what) : Error(what) {}
};

class NotPositiveError : public Error {
  public:
    explicit NotPositiveError(const std::string &what) : Error(what) {}
};

class CTooLargeError : public Error {
  public:
    explicit CTooLargeError(const std::string &what) : Error(what) {}
};

class ZeroSuccessProbabilityError : public Error {
  public:
    explicit ZeroSuccessProbabilityError(const std::string &what) : Error(what) {}
};

class EncodingOverflowError : public Error {
  public:
    explicit EncodingOverflowError(const std::string &what) : Error(what) {}
};

class UncomputeLeakError : public Error {
  public:
    explicit UncomputeLeakError(const std::string &what) : Error(what) {}
};

class IndexOutOfRangeError : public Error {
  public:
    explicit IndexOutOfRangeError(const std::string &what) : Error(what) {}
};

class NotPauliStringError : public Error {
  public:
    explicit NotPauliStringError(const std::string &what) : Error(what) {}
};

class NotPowerOfTwoError : public Error {
  public:
    explicit NotPowerOfTwoError(const std::string &what) : Error(what) {}
};

/// Thrown when a conditional estimate is requested for an ancilla branch
/// that received no shots.
class EmptyBranchError : public Error {
  public:
    EmptyBranchError(int branch, const std::string &what) : Error(what), branch_(branch) {}
    int branch() const { return branch_; }

  private:
    int branch_;
};

class ParseError : public Error {
  public:
    explicit ParseError(const std::string &what) : Error(what) {}
};

class InvalidArgumentError : public Error {
  public:
    explicit InvalidArgumentError(const std::string &what) : Error(what) {}
};

} // namespace hhl
