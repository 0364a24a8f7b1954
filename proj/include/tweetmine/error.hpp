#pragma once

#include <stdexcept>
#include <string>

namespace tweetmine {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed an argument that violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input data is unusable (unreadable file, empty corpus, missing class...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A persisted file does not follow its expected layout.
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace tweetmine
