#pragma once

#include <stdexcept>
#include <string>

namespace qlc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidDimension : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct NoStationaryState : Error { using Error::Error; };
struct DegenerateSpectrum : Error {
  DegenerateSpectrum(const std::string& what, int kernel_dim)
      : Error(what), kernel_dim(kernel_dim) {}
  int kernel_dim;
};
struct PreconditionViolated : Error { using Error::Error; };
struct StiffnessError : Error { using Error::Error; };
struct DivergenceError : Error {
  DivergenceError(const std::string& what, long step) : Error(what), step(step) {}
  long step;
};
struct BoundaryContamination : Error { using Error::Error; };
struct GridTooCoarse : Error { using Error::Error; };

}  // namespace qlc
