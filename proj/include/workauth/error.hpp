#pragma once

#include <stdexcept>
#include <string>

namespace workauth {

/// Failure carrying a stable machine-readable code (e.g. "NOT_FOUND",
/// "UNBOUND_PREFIX"). Codes are part of the public contract; messages are not.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace workauth
