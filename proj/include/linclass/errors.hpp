#pragma once

#include <stdexcept>
#include <string>

namespace linclass {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPrimePower : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct ZeroColumn : Error {
  using Error::Error;
};
struct RankDeficient : Error {
  using Error::Error;
};
struct RankCollapse : Error {
  using Error::Error;
};
struct DimensionTooLarge : Error {
  using Error::Error;
};
struct InconsistentInput : Error {
  using Error::Error;
};
struct EnvelopeViolation : Error {
  using Error::Error;
};
struct ScaleExceeded : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

}  // namespace linclass
