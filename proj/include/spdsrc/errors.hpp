#pragma once

#include <stdexcept>
#include <string>

namespace spdsrc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NotSymmetric : Error {
  using Error::Error;
};

struct NotPositiveDefinite : Error {
  using Error::Error;
};

struct NonFinite : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct SpecChannelMismatch : Error {
  using Error::Error;
};

struct RegionOutOfBounds : Error {
  using Error::Error;
};

struct NotDivisible : Error {
  using Error::Error;
};

}  // namespace spdsrc
