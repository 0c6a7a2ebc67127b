#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracham {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGrid : public Error {
 public:
  using Error::Error;
};

/// A field sample is NaN or Inf.
class InvalidField : public Error {
 public:
  InvalidField(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Binary operation on fields that live on different grids.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

class UnknownFamily : public Error {
 public:
  using Error::Error;
};

/// beta * t^2 exceeded the exp() ceiling. `location` is the argument t, or the
/// grid coordinate x when raised from a field-level integral.
class OverflowGuard : public Error {
 public:
  OverflowGuard(const std::string& what, double location)
      : Error(what), location_(location) {}
  double location() const noexcept { return location_; }

 private:
  double location_;
};

/// The ray maximum sits at t -> 0: the direction has no usable W+ part.
class NoAscent : public Error {
 public:
  using Error::Error;
};

class MaxIterations : public Error {
 public:
  using Error::Error;
};

/// The grid spacing does not resolve the finest feature of a sampled profile.
class UnderResolved : public Error {
 public:
  using Error::Error;
};

}  // namespace fracham
