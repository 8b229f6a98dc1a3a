#include "archk/errors.hpp"

namespace archk {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::GovernorNotCategorical: return "GovernorNotCategorical";
    case Errc::ClauseValueOutsideDomain: return "ClauseValueOutsideDomain";
    case Errc::DuplicateDimensionId: return "DuplicateDimensionId";
    case Errc::InvalidDimensionId: return "InvalidDimensionId";
    case Errc::DuplicateCategoryValue: return "DuplicateCategoryValue";
    case Errc::EmptyBounds: return "EmptyBounds";
    case Errc::TooFewCategories: return "TooFewCategories";
    case Errc::UnknownDimension: return "UnknownDimension";
    case Errc::UndecidableActivity: return "UndecidableActivity";
    case Errc::MissingActiveValue: return "MissingActiveValue";
    case Errc::ValueOutOfBounds: return "ValueOutOfBounds";
    case Errc::UnknownCategory: return "UnknownCategory";
    case Errc::MissingGamma: return "MissingGamma";
    case Errc::GammaOutOfRange: return "GammaOutOfRange";
    case Errc::MissingValue: return "MissingValue";
    case Errc::InvalidCategoryCount: return "InvalidCategoryCount";
    case Errc::NegativeDistance: return "NegativeDistance";
    case Errc::InvalidHyperparameter: return "InvalidHyperparameter";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotFactorizable: return "NotFactorizable";
    case Errc::AllCandidatesFailed: return "AllCandidatesFailed";
    case Errc::AsymmetricInput: return "AsymmetricInput";
    case Errc::IoError: return "IoError";
    case Errc::ParseError: return "ParseError";
  }
  return "UnknownError";
}

}  // namespace archk
