#pragma once

#include <stdexcept>

namespace ikrylov {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotPositiveDefinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NegativeQuadraticForm : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidSpec : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidAccuracy : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnsupportedFormat : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MalformedFile : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotSymmetric : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroDirection : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct OutOfRange : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegenerateResidual : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IndefiniteCurvature : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ikrylov
