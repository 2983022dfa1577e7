// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace rrc {

/// Base class for every rejection raised by the library. Operations throw
/// on precondition violations and malformed input; the CLI maps these to
/// exit status 2.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace rrc
