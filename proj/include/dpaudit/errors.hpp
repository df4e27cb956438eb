#ifndef DPAUDIT_ERRORS_HPP_
#define DPAUDIT_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dpaudit {

// Machine-readable error categories. The CLI maps these to exit codes and
// prints the category name, so keep the names stable.
enum class Errc {
  validation,         // bad parameter or malformed value
  parse,              // unreadable input document
  io,                 // file system failure
  unknown_id,         // unknown mechanism / experiment id
  mode_mismatch,      // counts file incompatible with configured likelihood
  degenerate_region,  // trade-off shell has (numerically) zero area
  insufficient_data,  // not enough samples to fit/estimate
  numeric,            // invariant-violating numerical state
};

std::string_view errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

inline std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::validation: return "validation";
    case Errc::parse: return "parse";
    case Errc::io: return "io";
    case Errc::unknown_id: return "unknown-id";
    case Errc::mode_mismatch: return "mode-mismatch";
    case Errc::degenerate_region: return "degenerate-region";
    case Errc::insufficient_data: return "insufficient-data";
    case Errc::numeric: return "numeric";
  }
  return "unknown";
}

}  // namespace dpaudit

#endif  // DPAUDIT_ERRORS_HPP_
