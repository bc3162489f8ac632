#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ltd {

enum class ErrorKind {
  dimension,
  normalization,
  positivity,
  shape,
  size,
  parameter,
  resolution,
  model,
  degenerate_clock,
  undefined_clock,
  cutoff,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above; the
/// command-line front end maps kinds onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace ltd
