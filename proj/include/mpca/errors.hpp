// Error codes shared by all solver modules.
#pragma once

#include <stdexcept>
#include <string>

namespace mpca {

enum class ErrorCode {
  DimensionMismatch,
  NonPositiveGain,
  NonPositiveRate,
  TooManyUsers,
  RateTargetMissed,
  PowerRateMismatch,
  ParseError,
  InstanceTooLarge,
  Infeasible,
  WrongStructure,
  WrongModel,
  NotDivisible,
  MalformedCnf,
  NotThreeSat,
  OccurrenceBoundViolated,
  BadFlags,
};

const char* error_code_name(ErrorCode code);

class MpcaError : public std::runtime_error {
 public:
  MpcaError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mpca
