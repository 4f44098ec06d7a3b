#pragma once

#include <stdexcept>
#include <string>

namespace bilocal {

enum class ErrorCode {
  NotNormalized,
  BadIndex,
  NotHermitian,
  NoConvergence,
  WrongDimension,
  InvalidState,
  InvalidArgument,
  Parse,
  Io,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the eigensolver when the sweep limit is hit; carries the
/// off-diagonal Frobenius norm left over.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(double residual, int sweeps)
      : Error(ErrorCode::NoConvergence,
              "Jacobi eigensolver did not converge after " + std::to_string(sweeps) +
                  " sweeps (off-diagonal norm " + std::to_string(residual) + ")"),
        residual_(residual),
        sweeps_(sweeps) {}

  double residual() const noexcept { return residual_; }
  int sweeps() const noexcept { return sweeps_; }

 private:
  double residual_;
  int sweeps_;
};

}  // namespace bilocal
