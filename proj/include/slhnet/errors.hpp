// Copyright 2026 The slhnet authors
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

namespace slhnet {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input: bad shapes, unknown labels, invalid arguments.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A network whose feedback loop has no well-posed zero-delay limit
/// (the internal scattering block S_ii - I is numerically singular).
class IllPosedError : public Error {
public:
    using Error::Error;
};

/// A mathematical hypothesis required by a reduction is not met
/// (Hurwitz stability, kernel condition, invertibility, identity residual).
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace slhnet
