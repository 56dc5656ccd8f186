#pragma once

#include <stdexcept>

namespace guesswork {

// A model contract was broken: bad probabilities, malformed spec files,
// operations a source type does not support.
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative routine failed to reach its tolerance.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A work bound was exceeded; the message names the cheaper route when one exists.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace guesswork
