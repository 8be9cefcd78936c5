#include "xbf/errors.hpp"

namespace xbf {

const char *to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::domain:
    return "domain";
  case ErrorKind::configuration:
    return "configuration";
  case ErrorKind::contract:
    return "contract";
  case ErrorKind::divergence:
    return "divergence";
  case ErrorKind::numerical_failure:
    return "numerical_failure";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string &message)
    : std::runtime_error(message), kind_(kind) {}

} // namespace xbf
