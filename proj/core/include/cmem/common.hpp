// cmem/common.hpp

// Copyright 2026  The cmem Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CMEM_COMMON_HPP_
#define CMEM_COMMON_HPP_

#include <exception>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cmem {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

namespace internal {

// Collects a message via operator<< and throws cmem::Error on destruction.
class ErrorStream {
 public:
  ErrorStream(const char* file, int line) {
    os_ << file << ":" << line << ": ";
  }
  ~ErrorStream() noexcept(false) {
    if (std::uncaught_exceptions() == 0) throw Error(os_.str());
  }
  template <typename T>
  ErrorStream& operator<<(const T& v) {
    os_ << v;
    return *this;
  }

 private:
  std::ostringstream os_;
};

}  // namespace internal
}  // namespace cmem

#define CMEM_ERR cmem::internal::ErrorStream(__FILE__, __LINE__)

#define CMEM_CHECK(cond) \
  if (cond) {            \
  } else                 \
    CMEM_ERR << "check failed: (" #cond ") "

#endif  // CMEM_COMMON_HPP_
