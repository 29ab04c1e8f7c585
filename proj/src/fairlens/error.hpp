#pragma once

#include <stdexcept>
#include <string>

namespace fairlens {

enum class ErrorKind {
  InvalidArgument,
  Io,
  Parse,
  Domain,
  Internal,
};

/// Base error for every failure raised by the core library. The C API maps
/// `kind()` onto `fl_status` codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error invalid_argument(const std::string& message) {
  return Error(ErrorKind::InvalidArgument, message);
}
inline Error io_error(const std::string& message) { return Error(ErrorKind::Io, message); }
inline Error parse_error(const std::string& message) { return Error(ErrorKind::Parse, message); }
inline Error domain_error(const std::string& message) { return Error(ErrorKind::Domain, message); }

}  // namespace fairlens
