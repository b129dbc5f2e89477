#pragma once

#include <stdexcept>
#include <string>

namespace gavg {

// Bad argument or violated precondition. CLI maps this to exit code 2.
class invalid_parameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A group element moves a masked node outside the domain. Exit code 3.
class invariant_domain_violation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Functional fails its invariance check for the requested group. Exit code 3.
class not_invariant_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Energy became non-finite or fell below the divergence floor. Exit code 4.
class divergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened or written. Exit code 5.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (field files, config files, spec strings). Exit code 2.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gavg
