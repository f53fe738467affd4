#pragma once

#include <stdexcept>
#include <string>

namespace qmse {

// Base of every error raised by the library. Each failure mode has its own
// subclass so callers (and tests) can react to the specific condition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QMSE_DEFINE_ERROR(Name)          \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  };

QMSE_DEFINE_ERROR(DegenerateVector)
QMSE_DEFINE_ERROR(DimensionError)
QMSE_DEFINE_ERROR(RankDeficient)
QMSE_DEFINE_ERROR(SingularMatrix)
QMSE_DEFINE_ERROR(ContractViolation)
QMSE_DEFINE_ERROR(EmptyEnsemble)
QMSE_DEFINE_ERROR(InvalidGain)
QMSE_DEFINE_ERROR(DegenerateIterate)
QMSE_DEFINE_ERROR(EmptyData)
QMSE_DEFINE_ERROR(InvalidStart)
QMSE_DEFINE_ERROR(InvalidDimension)
QMSE_DEFINE_ERROR(InvalidData)
QMSE_DEFINE_ERROR(RangeError)
QMSE_DEFINE_ERROR(ConfigError)
QMSE_DEFINE_ERROR(IoError)

#undef QMSE_DEFINE_ERROR

}  // namespace qmse
