#pragma once

#include <stdexcept>
#include <string>

namespace fermicorr {

/// Input failed a documented invariant. The message names the invariant.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Parameters are outside the regime where the second-order state is meaningful
/// (the |eg> population 1 + 2 Re A is no longer positive).
class OutOfRegimeError : public std::runtime_error {
 public:
  OutOfRegimeError(const std::string& what, double xi, double coupling)
      : std::runtime_error(what), xi_(xi), coupling_(coupling) {}

  double xi() const noexcept { return xi_; }
  double coupling() const noexcept { return coupling_; }

 private:
  double xi_;
  double coupling_;
};

}  // namespace fermicorr
