#pragma once

#include <stdexcept>
#include <string>

namespace eon {

// Base for every error raised by the library. Subclasses let callers map
// failures onto CLI exit codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnknownNameError : public Error {
 public:
  using Error::Error;
};

class NoPathError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

class TooLargeError : public Error {
 public:
  using Error::Error;
};

// Raised when a heuristic cannot place a demand on any of its candidate paths.
class CapacityExhaustedError : public Error {
 public:
  CapacityExhaustedError(int demand_id, const std::string& what)
      : Error(what), demand_id_(demand_id) {}
  int demand_id() const { return demand_id_; }

 private:
  int demand_id_;
};

}  // namespace eon
