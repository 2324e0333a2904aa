#pragma once

#include <stdexcept>
#include <string>

namespace droca {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller handed us something outside an operation's domain
// (unknown state, letter outside the alphabet, mismatched alphabets...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Malformed automaton text. field() names the offending JSON field.
class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// The same word was labelled both positive and negative.
class SampleConflict : public Error {
 public:
  using Error::Error;
};

// SAT backend failure: missing executable, crash, garbage output, timeout.
class BackendError : public Error {
 public:
  using Error::Error;
};

// An invariant that the algorithms guarantee was found broken.
// Subclass for a solver that ran into its time limit.
class DeadlineExceeded : public BackendError {
 public:
  using BackendError::BackendError;
};

class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

class GenerationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace droca
