// Copyright 2026 The jsdrazor Authors
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

#include <stdexcept>
#include <string>

namespace jsdrazor {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define JSDRAZOR_DEFINE_ERROR(Name)         \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

JSDRAZOR_DEFINE_ERROR(EmptyData);
JSDRAZOR_DEFINE_ERROR(DimensionError);
JSDRAZOR_DEFINE_ERROR(DomainError);
JSDRAZOR_DEFINE_ERROR(SimplexError);
JSDRAZOR_DEFINE_ERROR(ConfigError);
JSDRAZOR_DEFINE_ERROR(BoundaryError);
JSDRAZOR_DEFINE_ERROR(NumericalUnderflow);
JSDRAZOR_DEFINE_ERROR(SampleTooSmall);
JSDRAZOR_DEFINE_ERROR(UnsupportedDimension);
JSDRAZOR_DEFINE_ERROR(UnsupportedScale);
JSDRAZOR_DEFINE_ERROR(HessianNotPD);
JSDRAZOR_DEFINE_ERROR(SimulatorContractError);
JSDRAZOR_DEFINE_ERROR(ConstraintError);

#undef JSDRAZOR_DEFINE_ERROR

/// A simulator call failed; carries the parameter vector that triggered it.
class SimulatorError : public Error {
 public:
  SimulatorError(const std::string& what, std::string theta)
      : Error(what + " at theta=" + theta), theta_(std::move(theta)) {}
  const std::string& theta() const noexcept { return theta_; }

 private:
  std::string theta_;
};

}  // namespace jsdrazor
