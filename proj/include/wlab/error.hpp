#pragma once

#include <stdexcept>
#include <string>

namespace wlab {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A function was evaluated outside its declared domain, or hit a pole.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An input violated an operation's precondition (non-elliptic relation,
/// symmetry failure, non-positive metric, ...).
class RejectedInput : public Error {
 public:
  using Error::Error;
};

/// Malformed file or JSON content.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace wlab
