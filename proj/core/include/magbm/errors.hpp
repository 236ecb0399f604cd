#pragma once
#include <stdexcept>
#include <string>

namespace magbm {

// Bad arguments: outside an operation's documented domain.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Numerical failure: singular resolvent, closed gap, bracket without a root.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace magbm
