// Copyright 2026 The mie authors
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

namespace mie {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

class FrameTooSmall : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class MalformedLine : public Error {
 public:
  MalformedLine(const std::string& file, int line_number, const std::string& detail)
      : Error(file + ":" + std::to_string(line_number) + ": " + detail),
        line_number_(line_number) {}

  int line_number() const { return line_number_; }

 private:
  int line_number_;
};

class ValueOutOfRange : public Error {
 public:
  using Error::Error;
};

class ConfidenceOutOfRange : public Error {
 public:
  using Error::Error;
};

class EmptySequence : public Error {
 public:
  using Error::Error;
};

class UnparsableTimestamp : public Error {
 public:
  using Error::Error;
};

class UnsortedInput : public Error {
 public:
  using Error::Error;
};

class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

class NoGroundTruth : public Error {
 public:
  using Error::Error;
};

/// File decode/encode failures (bad magic, truncated stream, unwritable path).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mie
