#pragma once

#include <stdexcept>
#include <string>

namespace fgt {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed cycle notation or group file input.
class ParseError : public Error {
public:
  using Error::Error;
};

// Permutations of different degrees were combined.
class DegreeMismatch : public Error {
public:
  using Error::Error;
};

// A configured bound was exceeded. The message names the bound.
class CapacityError : public Error {
public:
  using Error::Error;
};

// A subgroup/normality precondition does not hold.
class ContainmentError : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

// A checked internal postcondition failed; indicates an engine bug.
class InternalError : public Error {
public:
  using Error::Error;
};

} // namespace fgt
