#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace anharmonic {

// Violation of a documented numerical contract (bad argument, precondition
// breach, non-finite data). The tag is a short machine-readable phrase; the
// CLI serializes it into error JSON and maps it to exit code 1.
class contract_error : public std::runtime_error {
public:
  explicit contract_error(std::string tag, const std::string& detail = {})
      : std::runtime_error(detail.empty() ? tag : tag + ": " + detail),
        tag_(std::move(tag)) {}

  const std::string& tag() const noexcept { return tag_; }

private:
  std::string tag_;
};

[[noreturn]] inline void fail(std::string tag, const std::string& detail = {}) {
  throw contract_error(std::move(tag), detail);
}

inline void require(bool cond, const char* tag, const std::string& detail = {}) {
  if (!cond) fail(tag, detail);
}

}  // namespace anharmonic
