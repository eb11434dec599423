#pragma once

#include <stdexcept>
#include <string>

namespace ncgeom {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: dimension mismatches, out-of-range parameters,
/// unparsable text.
class invalid_input : public error {
 public:
  using error::error;
};

/// A contract precondition of an experiment does not hold (e.g. a map that
/// was required to be fixed-point free has an interior fixed point).
class precondition_failure : public error {
 public:
  using error::error;
};

/// A point left the domain where it was required to stay, or an evaluation
/// hit a singular resolvent / defect.
class domain_violation : public error {
 public:
  using error::error;
};

/// Iterative procedure did not converge or produced an undecidable outcome.
class numerical_failure : public error {
 public:
  using error::error;
};

/// A property the theory guarantees was observed to fail.
class property_violation : public error {
 public:
  using error::error;
};

}  // namespace ncgeom
