#pragma once

#include <stdexcept>
#include <string>

namespace lzero {

// Bad user input: malformed body specs, out-of-range parameters, dimension
// mismatches. The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure did not reach its tolerance. Carries the best
// estimate obtained so far. The CLI maps this to exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double partial)
      : std::runtime_error(what), partial_(partial) {}
  double partial_estimate() const noexcept { return partial_; }

 private:
  double partial_;
};

}  // namespace lzero
