// Copyright 2026 The chist Authors
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

namespace chist {

// Every failure raised by the library derives from Error so callers can
// catch the whole family at once; the concrete type names the condition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define CHIST_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                     \
   public:                                                        \
    using Error::Error;                                           \
    const char* kind() const noexcept override { return #Name; } \
  }

CHIST_DEFINE_ERROR(NormalizationError);
CHIST_DEFINE_ERROR(DimError);
CHIST_DEFINE_ERROR(FlavorError);
CHIST_DEFINE_ERROR(NotProjectorError);
CHIST_DEFINE_ERROR(OrthogonalityError);
CHIST_DEFINE_ERROR(CompletenessError);
CHIST_DEFINE_ERROR(IncompatibleFrameworksError);
CHIST_DEFINE_ERROR(WeightError);
CHIST_DEFINE_ERROR(GridMismatchError);
CHIST_DEFINE_ERROR(FamilyError);
CHIST_DEFINE_ERROR(EventError);
CHIST_DEFINE_ERROR(InconsistentFamilyError);
CHIST_DEFINE_ERROR(ZeroConditionError);
CHIST_DEFINE_ERROR(FactorizationError);
CHIST_DEFINE_ERROR(ModelError);
CHIST_DEFINE_ERROR(ParseError);
CHIST_DEFINE_ERROR(ValidationError);

#undef CHIST_DEFINE_ERROR

}  // namespace chist
