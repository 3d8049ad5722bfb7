/*
 * Copyright (c) 2026 The extpass Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace extpass {

enum class ErrorCode {
  MissingManifest,
  MalformedManifest,
  CorruptContainer,
  UnsupportedContainer,
  ParseFailure,
  EmptyPath,
  UnknownFormat,
  OutputUnwritable,
  IoError,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingManifest: return "MissingManifest";
    case ErrorCode::MalformedManifest: return "MalformedManifest";
    case ErrorCode::CorruptContainer: return "CorruptContainer";
    case ErrorCode::UnsupportedContainer: return "UnsupportedContainer";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::EmptyPath: return "EmptyPath";
    case ErrorCode::UnknownFormat: return "UnknownFormat";
    case ErrorCode::OutputUnwritable: return "OutputUnwritable";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace extpass
