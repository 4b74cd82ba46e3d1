// Copyright 2026 The svx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
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

namespace svx {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed an out-of-range parameter or an inconsistent request.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A file exists but its content cannot be decoded.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Volumes, frames or maps whose dimensions disagree.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A value does not fit the chosen encoding (e.g. too many labels for 24 bits).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Missing paths, unreadable or unwritable files.
class IoError : public Error {
 public:
  using Error::Error;
};

/// An internal postcondition failed. Always a bug.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace svx
