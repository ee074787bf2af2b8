#pragma once

#include <stdexcept>
#include <string>

namespace frontburn {

/// Base for every runtime failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pivot of a banded solve vanished.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// The front came within the pad region of a window edge.
class WindowAdequacyError : public Error {
 public:
  using Error::Error;
};

/// The mean profile does not cross 1/2 inside the window.
class FrontNotFoundError : public Error {
 public:
  using Error::Error;
};

/// Two states or profiles do not live on compatible grids.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace frontburn
