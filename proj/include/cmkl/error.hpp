/*
 * Copyright 2026 The cmkl Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CMKL_ERROR_HPP_
#define CMKL_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace cmkl {

// Base for every error raised by the library. The CLI maps the three
// subclasses onto exit codes 2 (config), 3 (data) and 4 (numerical).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments, shape mismatches, malformed configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Unreadable or malformed input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// Factorization failures, degenerate kernels, unbounded programs.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace cmkl

#endif  // CMKL_ERROR_HPP_
