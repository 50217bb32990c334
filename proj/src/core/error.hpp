// Copyright 2026 the bgmrf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
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

namespace bgmrf {

enum class ErrorCode {
    usage = 1,  // bad arguments, invalid parameter values, unknown config keys
    data = 2    // bad input data: missing files, decode failures, dimension mismatches
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail_usage(const std::string& msg) { throw Error(ErrorCode::usage, msg); }
[[noreturn]] inline void fail_data(const std::string& msg) { throw Error(ErrorCode::data, msg); }

} // namespace bgmrf
