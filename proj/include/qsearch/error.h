/*
 * Copyright 2026 The qsearch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QSEARCH_ERROR_H
#define QSEARCH_ERROR_H

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qsearch {

enum class ErrorCode {
    IndexOutOfRange,
    DuplicateQubit,
    UnwrittenClassicalBit,
    RewrittenClassicalBit,
    NotLowered,
    ParseError,
    BadArity,
    BadMask,
    MethodArityMismatch,
    MissingAncilla,
    UnsupportedPartition,
    BadDiffuserSize,
    BadWidth,
    TooWide,
    UndefinedGateSemantics,
    HasMeasurement,
    WidthMismatch,
    Empty,
    ZeroTheoretical,
    BadQ,
    ZeroSuccess,
    BadCounts,
    Validation,
    Io,
};

const char *error_code_name(ErrorCode code);

/// Base exception for every failure raised by the library. `code()` identifies the failure class.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message);
    ErrorCode code() const noexcept {
        return code_;
    }

   private:
    ErrorCode code_;
};

class ParseError : public Error {
   public:
    ParseError(std::size_t line, std::size_t column, const std::string &message);
    std::size_t line() const noexcept {
        return line_;
    }
    std::size_t column() const noexcept {
        return column_;
    }

   private:
    std::size_t line_;
    std::size_t column_;
};

/// Configuration problem; `field()` names the offending config key.
class ValidationError : public Error {
   public:
    ValidationError(std::string field, const std::string &message);
    const std::string &field() const noexcept {
        return field_;
    }

   private:
    std::string field_;
};

}  // namespace qsearch

#endif
