#ifndef RELMAJ_ERRORS_HPP
#define RELMAJ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace relmaj {

enum class ErrorKind {
  DimensionMismatch,
  InvalidDistribution,
  InvalidChannel,
  NotMajorized,
  RankDeficient,
  IrrationalInput,
  EqualRelativeSpectra,
  PermutationEqual,
  StructureError,
  ConditionNotMet,
  ParseError,
  InvalidArgument,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void throw_error(ErrorKind kind, const std::string& what);

}  // namespace relmaj

#endif
