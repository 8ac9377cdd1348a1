// Copyright 2026 The Pardaz Authors
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

#ifndef PARDAZ_ERROR_H_
#define PARDAZ_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pardaz {

// Base class of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (rule files, traces, datasets). Carries the origin and
// 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(std::string origin, std::size_t line, const std::string& what)
      : Error(origin + ":" + std::to_string(line) + ": " + what),
        origin_(std::move(origin)),
        line_(line) {}

  const std::string& origin() const { return origin_; }
  std::size_t line() const { return line_; }

 private:
  std::string origin_;
  std::size_t line_;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Model file is truncated, corrupted or of an unsupported version.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace pardaz

#endif  // PARDAZ_ERROR_H_
