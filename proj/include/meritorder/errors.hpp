#ifndef MERITORDER_ERRORS_HPP
#define MERITORDER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace meritorder {

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A caller broke an operation's precondition, or an internal invariant failed.
class ContractViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Malformed or inconsistent configuration input.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace meritorder

#endif // MERITORDER_ERRORS_HPP
