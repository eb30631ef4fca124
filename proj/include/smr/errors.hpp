#pragma once

#include <stdexcept>
#include <string>

namespace smr {

// Base class for all failures raised by the library. The CLI maps these to
// exit codes: parse/validation errors -> 2, numerical failures -> 3.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class EmptyNetwork : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// A matrix that must be Hurwitz has an eigenvalue with real part >= -1e-12.
class NotStable : public Error {
 public:
  using Error::Error;
};

class SingularResolvent : public Error {
 public:
  using Error::Error;
};

// (I - D_K D_G) singular or nearly so: the interconnection has an algebraic loop.
class IllPosed : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

class DegenerateGramian : public Error {
 public:
  using Error::Error;
};

class SingularFastBlock : public Error {
 public:
  using Error::Error;
};

class UnstableInit : public Error {
 public:
  using Error::Error;
};

class UnstableIterate : public Error {
 public:
  using Error::Error;
};

class ObjectiveAtZero : public Error {
 public:
  using Error::Error;
};

}  // namespace smr
