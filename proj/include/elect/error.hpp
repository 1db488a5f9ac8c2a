#pragma once

#include <stdexcept>
#include <string>

namespace elect {

enum class errc {
  invalid_size,
  generation_failure,
  precondition,
  no_convergence,
  convergence_failure,
  model_violation,
  runaway,
  protocol_invariant,
  config,
  parse,
};

inline const char* to_string(errc code) {
  switch (code) {
    case errc::invalid_size: return "invalid-size";
    case errc::generation_failure: return "generation-failure";
    case errc::precondition: return "precondition";
    case errc::no_convergence: return "no-convergence";
    case errc::convergence_failure: return "convergence-failure";
    case errc::model_violation: return "model-violation";
    case errc::runaway: return "runaway";
    case errc::protocol_invariant: return "protocol-invariant";
    case errc::config: return "config";
    case errc::parse: return "parse";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the codes above.
class error : public std::runtime_error {
public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  errc code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

private:
  errc code_;
  std::string detail_;
};

}  // namespace elect
