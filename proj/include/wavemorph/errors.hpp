#pragma once

#include <stdexcept>
#include <string>

namespace wavemorph {

/// Bad input or a violated precondition (CLI exit code 2).
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Reading or writing a file failed (CLI exit code 3).
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant did not hold (CLI exit code 4).
class InvariantError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace wavemorph
