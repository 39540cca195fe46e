#pragma once

#include <stdexcept>
#include <string>

namespace deplab {

// Malformed input: bad argument values, out-of-range parameters, unparsable data.
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Illegal mixing of scalar representations (e.g. combining square-root
// extensions over different radicands, or implicit exact-to-float coercion).
class kind_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured resource cap would be exceeded.  Carries the cap's name so
// callers (and the command-line tool) can report which limit fired.
class resource_error : public std::runtime_error {
 public:
  resource_error(std::string cap_name, const std::string& message)
      : std::runtime_error(message), cap_name_(std::move(cap_name)) {}
  const std::string& cap_name() const noexcept { return cap_name_; }

 private:
  std::string cap_name_;
};

// A structural invariant of a distribution or model failed validation
// (negative probability, mass not summing to one, malformed edge functions).
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace deplab
