#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fucik {

enum class ErrorKind {
  Syntax,
  UnknownIdentifier,
  Arity,
  Domain,
  InvalidArgument,
  StepUnderflow,
  NonFinite,
  BracketFailure,
  QuadratureFailure,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures of the numerical machinery (as opposed to bad input).
  bool numerical() const noexcept {
    return kind_ == ErrorKind::StepUnderflow || kind_ == ErrorKind::NonFinite ||
           kind_ == ErrorKind::BracketFailure || kind_ == ErrorKind::QuadratureFailure ||
           kind_ == ErrorKind::Domain;
  }

 private:
  ErrorKind kind_;
};

/// Raised by the expression parser; carries the byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t position, const std::string& message)
      : Error(kind, "at position " + std::to_string(position) + ": " + message),
        position_(position),
        message_(message) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t position_;
  std::string message_;
};

}  // namespace fucik
