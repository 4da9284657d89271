#ifndef VARLEX_ERRORS_HPP
#define VARLEX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace varlex {

/// Raised when an input violates a structural contract (sizes, signs,
/// missing truncation, malformed config).
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a numeric argument is outside the mathematical domain of an
/// operation (e.g. Gamma at a non-positive point, stable index outside (0,2]).
class domain_error : public std::runtime_error {
 public:
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace varlex

#endif
