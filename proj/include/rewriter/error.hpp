/* Copyright 2026 The Rewriter Authors. All Rights Reserved.

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

#ifndef REWRITER_ERROR_HPP_
#define REWRITER_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rewriter {

// Base for all recoverable failures raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. line() is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& message)
      : Error(source + ":" + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A theme whose statistics cannot be normalized (all raw tf-idf zero).
class DegenerateThemeError : public Error {
 public:
  using Error::Error;
};

// A rewrite unit ended up with no outcome to choose from.
class EmptyCandidatesError : public Error {
 public:
  using Error::Error;
};

// Caller broke an API precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rewriter

#endif  // REWRITER_ERROR_HPP_
