// Copyright 2026 The LeakLab Authors
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

#ifndef LEAKLAB_ERRORS_H_
#define LEAKLAB_ERRORS_H_

#include <stdexcept>
#include <string>

namespace leaklab {

// Caller violated a precondition: dimension mismatch, wrong leakage mode,
// out-of-range argument.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A materialization guard was exceeded.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// An invariant that the preconditions guarantee did not hold. Indicates a
// broken oracle or a bug, never bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace leaklab

#endif  // LEAKLAB_ERRORS_H_
