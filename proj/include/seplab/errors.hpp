#pragma once

#include <stdexcept>
#include <string>

namespace seplab {

enum class ErrorKind {
  non_hermitian,
  dimension_mismatch,
  stream_exhausted,
  invalid_spec,
  domain_error,
  non_convergence,
  unsupported,
  division_by_zero,
  invalid_config,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::non_hermitian: return "NonHermitian";
    case ErrorKind::dimension_mismatch: return "DimensionMismatch";
    case ErrorKind::stream_exhausted: return "StreamExhausted";
    case ErrorKind::invalid_spec: return "InvalidSpec";
    case ErrorKind::domain_error: return "DomainError";
    case ErrorKind::non_convergence: return "NonConvergence";
    case ErrorKind::unsupported: return "Unsupported";
    case ErrorKind::division_by_zero: return "DivisionByZero";
    case ErrorKind::invalid_config: return "InvalidConfig";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define SEPLAB_ERROR_TYPE(Name, Kind)                                   \
  struct Name : Error {                                                 \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

SEPLAB_ERROR_TYPE(NonHermitian, non_hermitian)
SEPLAB_ERROR_TYPE(DimensionMismatch, dimension_mismatch)
SEPLAB_ERROR_TYPE(StreamExhausted, stream_exhausted)
SEPLAB_ERROR_TYPE(InvalidSpec, invalid_spec)
SEPLAB_ERROR_TYPE(DomainError, domain_error)
SEPLAB_ERROR_TYPE(NonConvergence, non_convergence)
SEPLAB_ERROR_TYPE(Unsupported, unsupported)
SEPLAB_ERROR_TYPE(DivisionByZero, division_by_zero)
SEPLAB_ERROR_TYPE(InvalidConfig, invalid_config)

#undef SEPLAB_ERROR_TYPE

}  // namespace seplab
