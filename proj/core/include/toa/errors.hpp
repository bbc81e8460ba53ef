#pragma once

#include <stdexcept>
#include <string>

namespace toa {

/// Base for every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define TOA_DEFINE_ERROR(Name)                   \
  class Name : public Error {                    \
   public:                                       \
    explicit Name(const std::string& what)       \
        : Error(std::string(#Name ": ") + what) {} \
  }

// clifford2
TOA_DEFINE_ERROR(ConstraintViolation);
// weyl-bd
TOA_DEFINE_ERROR(UnsupportedTerm);
TOA_DEFINE_ERROR(SingularGrid);
// conjugacy solver
TOA_DEFINE_ERROR(WindowTooSmall);
TOA_DEFINE_ERROR(Inconsistent);
// FV transform and spectral dynamics
TOA_DEFINE_ERROR(NearSingularU);
TOA_DEFINE_ERROR(SingularAtZero);
TOA_DEFINE_ERROR(TailMass);
TOA_DEFINE_ERROR(SupportViolation);
TOA_DEFINE_ERROR(GridMismatch);
// run configuration
TOA_DEFINE_ERROR(ConfigError);

#undef TOA_DEFINE_ERROR

}  // namespace toa
