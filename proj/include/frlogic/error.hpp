// Copyright 2026 The frlogic Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace frlogic {

enum class ErrorKind {
    NotNormalized,
    UnknownRegister,
    RegisterMismatch,
    TargetIsRecord,
    ZeroProbabilityCollapse,
    NonUnitarySegment,
    OutsideRange,
    UnsortedEvents,
    IllFormedEvents,
    ChainMismatch,
    BothZero,
    IncompleteOutcomeSet,
    InexactBasis,
    NotRepresentable,
    ComplementNonzero,
    InvalidArgument,
    ParseError,
    SemanticError,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::UnknownRegister: return "UnknownRegister";
    case ErrorKind::RegisterMismatch: return "RegisterMismatch";
    case ErrorKind::TargetIsRecord: return "TargetIsRecord";
    case ErrorKind::ZeroProbabilityCollapse: return "ZeroProbabilityCollapse";
    case ErrorKind::NonUnitarySegment: return "NonUnitarySegment";
    case ErrorKind::OutsideRange: return "OutsideRange";
    case ErrorKind::UnsortedEvents: return "UnsortedEvents";
    case ErrorKind::IllFormedEvents: return "IllFormedEvents";
    case ErrorKind::ChainMismatch: return "ChainMismatch";
    case ErrorKind::BothZero: return "BothZero";
    case ErrorKind::IncompleteOutcomeSet: return "IncompleteOutcomeSet";
    case ErrorKind::InexactBasis: return "InexactBasis";
    case ErrorKind::NotRepresentable: return "NotRepresentable";
    case ErrorKind::ComplementNonzero: return "ComplementNonzero";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SemanticError: return "SemanticError";
    }
    return "Unknown";
}

/// Base of every exception thrown by the library; carries a machine-checkable kind.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message),
          kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

/// Normalization failure. `deficit` is 1 - norm², printed canonically.
class NotNormalizedError : public Error {
  public:
    NotNormalizedError(std::string deficit, double deficit_value)
        : Error(ErrorKind::NotNormalized,
                "state norm^2 differs from 1 by " + deficit),
          deficit_(std::move(deficit)), deficit_value_(deficit_value) {}

    [[nodiscard]] const std::string &deficit() const noexcept { return deficit_; }
    [[nodiscard]] double deficit_value() const noexcept { return deficit_value_; }

  private:
    std::string deficit_;
    double deficit_value_;
};

/// Positioned syntax error from the experiment-description parser (1-based).
class ParseError : public Error {
  public:
    ParseError(std::size_t line, std::size_t col, std::string expected)
        : Error(ErrorKind::ParseError, std::to_string(line) + ":" +
                                           std::to_string(col) +
                                           ": expected " + expected),
          line_(line), col_(col), expected_(std::move(expected)) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t col() const noexcept { return col_; }
    [[nodiscard]] const std::string &expected() const noexcept { return expected_; }

  private:
    std::size_t line_;
    std::size_t col_;
    std::string expected_;
};

/// Well-formed syntax with an invalid meaning (unknown register, bad state, ...).
class SemanticError : public Error {
  public:
    SemanticError(std::size_t line, ErrorKind cause, const std::string &message)
        : Error(ErrorKind::SemanticError,
                "line " + std::to_string(line) + ": " +
                    std::string(to_string(cause)) + ": " + message),
          line_(line), cause_(cause) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] ErrorKind cause() const noexcept { return cause_; }

  private:
    std::size_t line_;
    ErrorKind cause_;
};

} // namespace frlogic
