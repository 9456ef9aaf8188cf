// Copyright 2026 The chartail Authors
//
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

#ifndef CHARTAIL_ERROR_HPP_
#define CHARTAIL_ERROR_HPP_

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace chartail {

/// Input or usage error: malformed files, violated preconditions, bad
/// arguments. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Broken internal invariant. The CLI maps these to exit code 2.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

template <class... Ts>
std::string str_cat(Ts&&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

}  // namespace detail

template <class... Ts>
[[noreturn]] void fail(Ts&&... parts) {
  throw Error(detail::str_cat(std::forward<Ts>(parts)...));
}

template <class... Ts>
void require(bool condition, Ts&&... parts) {
  if (!condition) fail(std::forward<Ts>(parts)...);
}

#define CHARTAIL_CHECK(cond)                                            \
  do {                                                                  \
    if (!(cond))                                                        \
      throw ::chartail::InternalError("invariant violated: " #cond);   \
  } while (0)

}  // namespace chartail

#endif  // CHARTAIL_ERROR_HPP_
