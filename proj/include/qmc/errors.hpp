#ifndef QMC_ERRORS_HPP
#define QMC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qmc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A requested volume or operator exceeds the configured enumeration cap.
class VolumeCapExceeded : public Error {
 public:
  using Error::Error;
};

class OverlappingSupport : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Two independent evaluation routes of the same quantity disagree.
class ConsistencyFailure : public Error {
 public:
  using Error::Error;
};

/// The broken-symmetry states only exist when Delta(theta) > 0.
class NoBrokenPhase : public Error {
 public:
  using Error::Error;
};

class NoRoot : public Error {
 public:
  using Error::Error;
};

class NonPositiveBoundary : public Error {
 public:
  using Error::Error;
};

class UnsupportedSize : public Error {
 public:
  using Error::Error;
};

}  // namespace qmc

#endif  // QMC_ERRORS_HPP
