#pragma once

#include <stdexcept>
#include <string>

namespace smalldoubling {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands live in different ambient groups.
class GroupMismatch : public Error {
 public:
  using Error::Error;
};

// An enumeration or table would exceed the desk-scale limits.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The caller asked for an operation whose mathematical precondition fails.
class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

// Malformed external input. `path` names the offending JSON field.
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace smalldoubling
