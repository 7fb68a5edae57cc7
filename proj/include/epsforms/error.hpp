#pragma once

#include <stdexcept>
#include <string>

namespace epsforms {

// Bad user input: unsupported level shape, malformed documents, k = 1, ...
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// The generated spanning set failed to reproduce the predicted pivot set,
// or an epsilon-subspace did not survive verification at extended precision.
class SpanningError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Truncation window too small for the requested operation.
class PrecisionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace epsforms
