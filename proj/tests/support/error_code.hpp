#pragma once

#include <functional>
#include <string>

#include "workauth/error.hpp"

namespace workauth::testing {

/// Code of the workauth::Error thrown by f, or "" when nothing is thrown.
inline std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace workauth::testing
