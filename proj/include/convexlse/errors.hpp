#pragma once

#include <stdexcept>
#include <string>

namespace convexlse {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct ParameterOutOfRange : Error {
  using Error::Error;
};
struct NonConvergence : Error {
  using Error::Error;
};
struct BadDescriptor : Error {
  using Error::Error;
};
struct EmptyGrid : Error {
  using Error::Error;
};
struct NegativeRadius : Error {
  using Error::Error;
};
struct BracketFailure : Error {
  using Error::Error;
};
struct NonPositiveTmu : Error {
  using Error::Error;
};
struct PointsNotOnGrid : Error {
  using Error::Error;
};
struct BadDesign : Error {
  using Error::Error;
};
struct NonMonotoneTruth : Error {
  using Error::Error;
};
struct NonPositiveValue : Error {
  using Error::Error;
};
struct TooFewPoints : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace convexlse
