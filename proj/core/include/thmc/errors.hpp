#ifndef THMC_ERRORS_HPP
#define THMC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace thmc {

// Base class for all library-defined error conditions.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// An input file could not be parsed; the message carries a line number.
class ParseError : public Error {
public:
  using Error::Error;
};

// No closed-form Markov basis is known for the requested (S, T).
class UnsupportedShapeError : public Error {
public:
  using Error::Error;
};

// A documented work or size cap would be exceeded.
class CapExceededError : public Error {
public:
  using Error::Error;
};

// Applying a move would drive some cell count negative.
class NegativityError : public Error {
public:
  using Error::Error;
};

}  // namespace thmc

#endif
