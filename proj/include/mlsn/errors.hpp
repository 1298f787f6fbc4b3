#pragma once

#include <stdexcept>

namespace mlsn {

// Malformed or inconsistent input: bad records, unknown ids, invalid arguments.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is well-formed but cannot support the requested computation
// (single-class labels, too few samples for the folds, no valid negatives).
class DataShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mlsn
