#ifndef CACHECODE_ERRORS_HPP
#define CACHECODE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cachecode {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CACHECODE_DEFINE_ERROR(Name)                         \
  class Name : public Error {                                \
   public:                                                   \
    explicit Name(const std::string& what) : Error(what) {} \
  }

CACHECODE_DEFINE_ERROR(CompositeModulus);
CACHECODE_DEFINE_ERROR(ReducibleModulus);
CACHECODE_DEFINE_ERROR(ZeroInverse);
CACHECODE_DEFINE_ERROR(FieldMismatch);
CACHECODE_DEFINE_ERROR(DimensionMismatch);
CACHECODE_DEFINE_ERROR(Singular);
CACHECODE_DEFINE_ERROR(Inconsistent);
CACHECODE_DEFINE_ERROR(FieldTooSmall);
CACHECODE_DEFINE_ERROR(TooManyErasures);
CACHECODE_DEFINE_ERROR(DependentPoints);
CACHECODE_DEFINE_ERROR(RankDeficient);
CACHECODE_DEFINE_ERROR(SearchExhausted);
CACHECODE_DEFINE_ERROR(MissingSymbols);
CACHECODE_DEFINE_ERROR(InvalidParams);
CACHECODE_DEFINE_ERROR(UnknownExample);
CACHECODE_DEFINE_ERROR(FormatError);

#undef CACHECODE_DEFINE_ERROR

}  // namespace cachecode

#endif  // CACHECODE_ERRORS_HPP
