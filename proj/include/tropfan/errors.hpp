#pragma once

#include <stdexcept>
#include <string>

namespace tropfan {

enum class Errc {
  NotFullRank,
  NotInLattice,
  ZeroVector,
  NotCodimOne,
  NotAFan,
  ZeroForm,
  BadRange,
  NotContained,
  SupportNotContained,
  NonIntegralWeight,
  NotIntoTarget,
  NotGeneric,
  DegreeMismatch,
  SingularRestriction,
  BadSplit,
  TooLarge,
  DimensionMismatch,
  WrongDimension,
  RetriesExhausted,
  Precondition,
  Parse,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace tropfan
