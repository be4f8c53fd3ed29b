#pragma once

#include <stdexcept>
#include <string>

namespace erdkit {

// Input-side failures (bad files, bad config, bad data). The CLI maps these to
// exit code 1. Internal invariant violations use std::logic_error (exit code 2).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatError : InputError {
  using InputError::InputError;
};

struct ConfigError : InputError {
  using InputError::InputError;
};

// Too few trials for a statistically meaningful band selection.
struct InsufficientDataError : InputError {
  using InputError::InputError;
};

// Band selection found no window where the reference-active spectral
// difference is positive and exceeds the confidence bound.
struct NoReactiveBandError : InputError {
  using InputError::InputError;
};

// Reference-window power was zero: a dead or fully suppressed window.
struct DegenerateReferenceError : InputError {
  using InputError::InputError;
};

inline void internal_check(bool ok, const std::string& what) {
  if (!ok) throw std::logic_error("internal invariant violated: " + what);
}

}  // namespace erdkit
