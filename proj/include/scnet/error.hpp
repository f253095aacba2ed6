// SPDX-License-Identifier: Apache-2.0
//
// scnet - complex-valued downlink CSI prediction for FDD massive MIMO
// Copyright (C) 2026 The scnet authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#pragma once

#include <stdexcept>
#include <string>

namespace scnet {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Array geometry or carrier frequency cannot produce a steering vector.
class InvalidConfigurationError : public Error {
public:
    using Error::Error;
};

/// A ray set that violates the Scenario invariants (empty, out-of-sector DOA, negative delay, ...).
class InvalidScenarioError : public Error {
public:
    using Error::Error;
};

/// Sampler or generator settings outside their domain.
class InvalidParametersError : public Error {
public:
    using Error::Error;
};

/// Dimension mismatch between vectors, batches, layers, tapes or gradient sets.
class ShapeError : public Error {
public:
    using Error::Error;
};

class InvalidArchitectureError : public Error {
public:
    using Error::Error;
};

class InvalidSplitError : public Error {
public:
    using Error::Error;
};

/// Every label in an NMSE evaluation had zero norm.
class DegenerateSampleError : public Error {
public:
    using Error::Error;
};

/// Loss became NaN or infinite; `epoch()` is 1-based.
class TrainingDivergedError : public Error {
public:
    TrainingDivergedError(int epoch, const std::string& what)
        : Error(what), epoch_(epoch) {}
    int epoch() const noexcept { return epoch_; }

private:
    int epoch_;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Binary file decoding failures. The subclasses let callers tell a foreign
/// file apart from an old one or a partially written one.
class FormatError : public IoError {
public:
    using IoError::IoError;
};

class BadMagicError : public FormatError {
public:
    using FormatError::FormatError;
};

class VersionMismatchError : public FormatError {
public:
    using FormatError::FormatError;
};

class TruncatedFileError : public FormatError {
public:
    using FormatError::FormatError;
};

/// Config file or flag problems. `line()` is 0 when the problem is not tied to a file line.
class ConfigError : public Error {
public:
    ConfigError(int line, const std::string& what)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace scnet
