// Copyright 2026 The dqbench Authors.
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

#ifndef DQBENCH_ERRORS_H_
#define DQBENCH_ERRORS_H_

#include <stdexcept>
#include <string>
#include <utility>

namespace dqbench {

// Base class for every error raised by the library. `code()` is a short
// machine-readable tag used by the CLI error line.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define DQBENCH_DEFINE_ERROR(Name, tag)                              \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& message) : Error(tag, message) {} \
  };

DQBENCH_DEFINE_ERROR(InvalidArgument, "invalid-argument")
DQBENCH_DEFINE_ERROR(NotFound, "not-found")
DQBENCH_DEFINE_ERROR(InvalidCatalog, "invalid-catalog")
DQBENCH_DEFINE_ERROR(InvalidConfig, "invalid-config")
DQBENCH_DEFINE_ERROR(ShapeError, "shape-error")
DQBENCH_DEFINE_ERROR(ArchitectureError, "architecture-error")
DQBENCH_DEFINE_ERROR(SingularJacobian, "singular-jacobian")
DQBENCH_DEFINE_ERROR(EmptyBank, "empty-bank")
DQBENCH_DEFINE_ERROR(NotReady, "not-ready")
DQBENCH_DEFINE_ERROR(FileError, "file-error")
DQBENCH_DEFINE_ERROR(EpisodeError, "episode-error")

#undef DQBENCH_DEFINE_ERROR

}  // namespace dqbench

#endif  // DQBENCH_ERRORS_H_
