/* Copyright 2026 The IRRM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef IRRM_ERRORS_HPP_
#define IRRM_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace irrm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input could not be parsed (wrong arity, bad header, truncated binary).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Parsed value violates a type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Symbol not in the phoneme inventory.
class VocabularyError : public Error {
 public:
  using Error::Error;
};

// Argument outside the operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Optimization produced a non-finite objective. Carries the objective
// values seen so far.
class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, std::vector<double> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

}  // namespace irrm

#endif  // IRRM_ERRORS_HPP_
