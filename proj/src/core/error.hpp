// Copyright 2026 The plmc-lab Authors
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

#include <Eigen/Core>

namespace plmc {

using Vector = Eigen::VectorXd;

// Mirrors plmc_status in the public C header; keep the numbering in sync.
enum class ErrorCode {
  InvalidArgument = 1,
  DimensionMismatch = 2,
  NotConverged = 3,
  Domain = 4,
  Config = 5,
  Io = 6,
  Internal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require_dimension(Eigen::Index expected, Eigen::Index got,
                              const char* what) {
  if (expected != got) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": expected dimension " +
                    std::to_string(expected) + ", got " + std::to_string(got));
  }
}

}  // namespace plmc
