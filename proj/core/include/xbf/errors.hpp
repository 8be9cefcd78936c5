#pragma once

#include <stdexcept>
#include <string>

namespace xbf {

enum class ErrorKind {
  domain,
  configuration,
  contract,
  divergence,
  numerical_failure,
};

const char *to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &message);
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
public:
  explicit DomainError(const std::string &message)
      : Error(ErrorKind::domain, message) {}
};

// Unsupported combination of method and parameters.
class ConfigurationError : public Error {
public:
  explicit ConfigurationError(const std::string &message)
      : Error(ErrorKind::configuration, message) {}
};

// Caller broke an input contract (e.g. unsorted samples).
class ContractError : public Error {
public:
  explicit ContractError(const std::string &message)
      : Error(ErrorKind::contract, message) {}
};

class DivergenceError : public Error {
public:
  explicit DivergenceError(const std::string &message)
      : Error(ErrorKind::divergence, message) {}
};

class NumericalFailure : public Error {
public:
  explicit NumericalFailure(const std::string &message)
      : Error(ErrorKind::numerical_failure, message) {}
};

namespace detail {

inline void require(bool condition, const std::string &message) {
  if (!condition) {
    throw DomainError(message);
  }
}

} // namespace detail
} // namespace xbf
