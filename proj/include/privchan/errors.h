//
// Copyright 2026 The Privchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PRIVCHAN_ERRORS_H_
#define PRIVCHAN_ERRORS_H_

#include <stdexcept>
#include <string>

namespace privchan {

// Base class for every error raised by the library. The CLI maps the
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that violates a documented contract. All of these map to the
// "validation" exit class.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IndexError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonStochasticError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Discretization grid leaves too much probability mass outside its range.
class GridError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A file failed schema validation. `pointer()` is a JSON pointer to the
// offending field ("" for the document root).
class SchemaError : public ValidationError {
 public:
  SchemaError(std::string pointer, const std::string& message)
      : ValidationError(pointer.empty() ? message : pointer + ": " + message),
        pointer_(std::move(pointer)) {}

  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

class EnumerationTooLargeError : public Error {
 public:
  using Error::Error;
};

}  // namespace privchan

#endif  // PRIVCHAN_ERRORS_H_
