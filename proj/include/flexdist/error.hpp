#pragma once

#include <stdexcept>
#include <string>

namespace flexdist {

/// A parameter or argument violates a documented constraint.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to reach its stated accuracy.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested capability does not exist for this family (e.g. the density of a g-and-h law).
class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace flexdist
