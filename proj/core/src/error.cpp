#include "fucik/error.hpp"

namespace fucik {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::UnknownIdentifier: return "unknown_identifier";
    case ErrorKind::Arity: return "arity";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::StepUnderflow: return "step_underflow";
    case ErrorKind::NonFinite: return "non_finite";
    case ErrorKind::BracketFailure: return "bracket_failure";
    case ErrorKind::QuadratureFailure: return "quadrature_failure";
  }
  return "unknown";
}

}  // namespace fucik
