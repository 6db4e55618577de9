#pragma once

#include <stdexcept>
#include <string>

namespace bipara {

/// Raised on violated preconditions. `field()` names the offending input
/// (a JSON key, a CLI flag, or an argument name) when one is known.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, std::string field = {})
      : std::runtime_error(what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace bipara
