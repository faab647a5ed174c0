// Copyright 2026 The Blockade Authors
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

namespace blockade {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or argument outside its documented domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Matrix shapes that do not line up.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// The ODE integrator could not meet its tolerance. Carries the time at which
/// it gave up.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double t)
        : Error(what + " (t = " + std::to_string(t) + ")"), time_(t) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

/// A density matrix drifted outside its Hermiticity, trace or positivity
/// tolerance. The state is never repaired; this is reported instead.
class InvariantViolation : public Error {
public:
    InvariantViolation(const std::string& what, double t)
        : Error(what + " (t = " + std::to_string(t) + ")"), time_(t) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

/// A Fourier reconstruction of a real envelope came back with a sizeable
/// imaginary part.
class SymmetryError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration. The message names the offending key.
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace blockade
