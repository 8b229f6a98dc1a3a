#pragma once

#include <cstring>
#include <stdexcept>
#include <string>
#include <string_view>

namespace archk {

/// Error categories raised across the library. The CLI maps these onto its
/// exit-code contract (I/O -> 1, domain/validation -> 2, numerical -> 3).
enum class Errc {
  // space structure
  CycleDetected,
  GovernorNotCategorical,
  ClauseValueOutsideDomain,
  DuplicateDimensionId,
  InvalidDimensionId,
  DuplicateCategoryValue,
  EmptyBounds,
  TooFewCategories,
  UnknownDimension,
  // configuration
  UndecidableActivity,
  MissingActiveValue,
  ValueOutOfBounds,
  UnknownCategory,
  // metric parameters
  MissingGamma,
  GammaOutOfRange,
  MissingValue,
  InvalidCategoryCount,
  // kernels
  NegativeDistance,
  InvalidHyperparameter,
  EmptyInput,
  DimensionMismatch,
  // gp
  NotFactorizable,
  AllCandidatesFailed,
  // verification
  AsymmetricInput,
  // files
  IoError,
  ParseError,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }
  const char* code_name() const noexcept { return errc_name(code_); }

  /// The message without the leading code name.
  std::string_view message() const noexcept {
    const std::string_view text = what();
    const std::size_t skip = std::strlen(code_name()) + 2;
    return text.size() >= skip ? text.substr(skip) : text;
  }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace archk
