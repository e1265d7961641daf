// Error types thrown by the library. Construction errors derive from
// std::invalid_argument, runtime/numerical errors from std::runtime_error.
#pragma once

#include <stdexcept>
#include <string>

namespace rdc {

struct InvalidGrid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidProfile : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidSpec : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidMetric : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidInvariantSet : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IntegrationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateWindow : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoBracket : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PremiseViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace rdc
