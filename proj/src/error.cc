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

#include "qsearch/error.h"

namespace qsearch {

const char *error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::IndexOutOfRange:
            return "IndexOutOfRange";
        case ErrorCode::DuplicateQubit:
            return "DuplicateQubit";
        case ErrorCode::UnwrittenClassicalBit:
            return "UnwrittenClassicalBit";
        case ErrorCode::RewrittenClassicalBit:
            return "RewrittenClassicalBit";
        case ErrorCode::NotLowered:
            return "NotLowered";
        case ErrorCode::ParseError:
            return "ParseError";
        case ErrorCode::BadArity:
            return "BadArity";
        case ErrorCode::BadMask:
            return "BadMask";
        case ErrorCode::MethodArityMismatch:
            return "MethodArityMismatch";
        case ErrorCode::MissingAncilla:
            return "MissingAncilla";
        case ErrorCode::UnsupportedPartition:
            return "UnsupportedPartition";
        case ErrorCode::BadDiffuserSize:
            return "BadDiffuserSize";
        case ErrorCode::BadWidth:
            return "BadWidth";
        case ErrorCode::TooWide:
            return "TooWide";
        case ErrorCode::UndefinedGateSemantics:
            return "UndefinedGateSemantics";
        case ErrorCode::HasMeasurement:
            return "HasMeasurement";
        case ErrorCode::WidthMismatch:
            return "WidthMismatch";
        case ErrorCode::Empty:
            return "Empty";
        case ErrorCode::ZeroTheoretical:
            return "ZeroTheoretical";
        case ErrorCode::BadQ:
            return "BadQ";
        case ErrorCode::ZeroSuccess:
            return "ZeroSuccess";
        case ErrorCode::BadCounts:
            return "BadCounts";
        case ErrorCode::Validation:
            return "Validation";
        case ErrorCode::Io:
            return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string &message)
    : Error(ErrorCode::ParseError,
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {
}

ValidationError::ValidationError(std::string field, const std::string &message)
    : Error(ErrorCode::Validation, field + ": " + message), field_(std::move(field)) {
}

}  // namespace qsearch
