// Copyright 2026 The autoctx Authors.
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

#ifndef AUTOCTX_ERROR_H_
#define AUTOCTX_ERROR_H_

#include <stdexcept>
#include <string>

namespace autoctx {

enum class ErrorKind {
  kFormat,       // wrong magic, wrong PNG type, malformed JSON
  kCorruption,   // header and payload disagree
  kValidation,   // value or shape violates an invariant
  kConsistency,  // two inputs disagree with each other
  kLookup,       // unknown registry key
  kUsage,        // bad arguments
  kConfig,       // pipeline configuration cannot be satisfied
  kIo,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error FormatError(const std::string& m) {
  return Error(ErrorKind::kFormat, m);
}
inline Error CorruptionError(const std::string& m) {
  return Error(ErrorKind::kCorruption, m);
}
inline Error ValidationError(const std::string& m) {
  return Error(ErrorKind::kValidation, m);
}
inline Error ConsistencyError(const std::string& m) {
  return Error(ErrorKind::kConsistency, m);
}
inline Error LookupError(const std::string& m) {
  return Error(ErrorKind::kLookup, m);
}
inline Error UsageError(const std::string& m) {
  return Error(ErrorKind::kUsage, m);
}
inline Error ConfigError(const std::string& m) {
  return Error(ErrorKind::kConfig, m);
}
inline Error IoError(const std::string& m) { return Error(ErrorKind::kIo, m); }

// Process exit code for the CLI: 2 for config/usage problems, 3 for bad data.
int ExitCodeFor(ErrorKind kind);

}  // namespace autoctx

#endif  // AUTOCTX_ERROR_H_
