// Copyright 2026 The sitsmon authors
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

namespace sitsmon {

/// Base error for all failures raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad arguments, violated preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Filesystem / format problems.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input data violates an invariant (shape mismatch, non-finite pixels, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Missing or inconsistent persisted artifacts.
class StateError : public Error {
 public:
  using Error::Error;
};

}  // namespace sitsmon
