#ifndef GMAP_ERRORS_HPP
#define GMAP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gmap {

/// Expression text failed to parse. `position` is a 1-based character offset.
class ParseError : public std::runtime_error {
public:
  ParseError(std::string message, std::size_t position)
      : std::runtime_error(std::move(message)), position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

/// Evaluation left the expression's real domain (ln of a non-positive value,
/// sqrt of a negative value, division by zero, non-finite result).
class DomainError : public std::runtime_error {
public:
  DomainError(std::string message, std::string subterm)
      : std::runtime_error(std::move(message)), subterm_(std::move(subterm)) {}
  const std::string& subterm() const { return subterm_; }

private:
  std::string subterm_;
};

class SingularMetricError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad input file, incompatible charts, unsupported backend and similar
/// caller mistakes that should surface as a tool error, not a crash.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numerical blow-up during path integration. Carries the arc position.
class BlowUpError : public std::runtime_error {
public:
  BlowUpError(std::string message, double arc_position)
      : std::runtime_error(std::move(message)), arc_position_(arc_position) {}
  double arc_position() const { return arc_position_; }

private:
  double arc_position_;
};

} // namespace gmap

#endif
