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

#include "autoctx/error.h"

namespace autoctx {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kFormat:
      return "format error";
    case ErrorKind::kCorruption:
      return "corruption error";
    case ErrorKind::kValidation:
      return "validation error";
    case ErrorKind::kConsistency:
      return "consistency error";
    case ErrorKind::kLookup:
      return "lookup error";
    case ErrorKind::kUsage:
      return "usage error";
    case ErrorKind::kConfig:
      return "config error";
    case ErrorKind::kIo:
      return "I/O error";
  }
  return "error";
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kConfig:
    case ErrorKind::kLookup:
      return 2;
    case ErrorKind::kFormat:
    case ErrorKind::kCorruption:
    case ErrorKind::kValidation:
    case ErrorKind::kConsistency:
      return 3;
    case ErrorKind::kIo:
      return 1;
  }
  return 1;
}

}  // namespace autoctx
