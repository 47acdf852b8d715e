#pragma once

#include <stdexcept>
#include <string>

namespace fso {

// Requested evaluation is outside the supported parameter classes.
class capability_error : public std::runtime_error {
 public:
  explicit capability_error(const std::string& what) : std::runtime_error(what) {}
};

// A contour (or other construction) could not be set up for the given input.
class evaluation_error : public std::runtime_error {
 public:
  explicit evaluation_error(const std::string& what) : std::runtime_error(what) {}
};

// The requested tolerance was not reached; carries the best estimate obtained.
class accuracy_error : public std::runtime_error {
 public:
  accuracy_error(const std::string& what, double best_estimate, double error_estimate)
      : std::runtime_error(what), best(best_estimate), err(error_estimate) {}
  double best;
  double err;
};

}  // namespace fso
