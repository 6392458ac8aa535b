#pragma once

#include <stdexcept>
#include <string>

namespace runsdist {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

/// A moment set handed to a conversion had the wrong kind, scheme or orders.
class OrderMismatch : public Error {
 public:
  using Error::Error;
};

class OrderExceedsTable : public Error {
 public:
  using Error::Error;
};

/// (c)_i vanished before a terminating 2F1 series ended.
class ZeroDenominatorPochhammer : public Error {
 public:
  using Error::Error;
};

class PoleAtS : public Error {
 public:
  using Error::Error;
};

class RootToleranceExceeded : public Error {
 public:
  using Error::Error;
};

class IllConditionedSystem : public Error {
 public:
  using Error::Error;
};

class ValidationFailed : public Error {
 public:
  using Error::Error;
};

class NonConvergentTail : public Error {
 public:
  using Error::Error;
};

}  // namespace runsdist
