// Copyright 2026 The handlabel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HANDLABEL_CORE_ERROR_HPP_
#define HANDLABEL_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace handlabel {

// Mirrors hl_status in the public C header; values must stay in sync.
enum class ErrorCode {
  kInvalidArgument = 1,
  kIo = 2,
  kParse = 3,
  kRegistration = 4,
  kDepthHoles = 5,
  kEmpty = 6,
  kOutOfRange = 7,
  kInternal = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace handlabel

#endif  // HANDLABEL_CORE_ERROR_HPP_
