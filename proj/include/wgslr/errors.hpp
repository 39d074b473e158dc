#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wgslr {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Likelihood ratio undefined because the H2 probability is zero.
class DegenerateInputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Quadrature or optimisation failed to reach its target.
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file; line is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

} // namespace wgslr
