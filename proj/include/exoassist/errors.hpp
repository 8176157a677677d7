// Copyright 2026 The exoassist Authors
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

namespace exoassist {

// Base of every error raised by the library. DomainError marks failures of
// the numerical pipeline itself (CLI exit code 2); the rest are usage, config
// or IO problems (exit code 1).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

#define EXOASSIST_DOMAIN_ERROR(Name)          \
  class Name : public DomainError {           \
   public:                                    \
    using DomainError::DomainError;           \
  }

// plant
class NonFiniteState : public DomainError {
 public:
  NonFiniteState(const std::string& what, int index = -1)
      : DomainError(what), index_(index) {}
  // Step index at which integration blew up, -1 when not part of a rollout.
  int index() const { return index_; }

 private:
  int index_;
};

// ilqr
EXOASSIST_DOMAIN_ERROR(HorizonMismatch);
EXOASSIST_DOMAIN_ERROR(NonPositiveDefinite);
EXOASSIST_DOMAIN_ERROR(IndexOutOfHorizon);

// blend
EXOASSIST_DOMAIN_ERROR(AllWeightsZero);
EXOASSIST_DOMAIN_ERROR(IncompatiblePolicies);

// intent
EXOASSIST_DOMAIN_ERROR(DegenerateLabels);
EXOASSIST_DOMAIN_ERROR(RankDeficient);
EXOASSIST_DOMAIN_ERROR(NoOnset);
EXOASSIST_DOMAIN_ERROR(InsufficientHistory);

// task
EXOASSIST_DOMAIN_ERROR(SingularJacobian);
EXOASSIST_DOMAIN_ERROR(UnreachableHoop);
EXOASSIST_DOMAIN_ERROR(NeverReachesHoopHeight);

#undef EXOASSIST_DOMAIN_ERROR

}  // namespace exoassist
