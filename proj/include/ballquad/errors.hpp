#pragma once

#include <stdexcept>
#include <string>

namespace ballquad {

// Base class for all hard errors raised by the library.  Callers that want
// blanket handling can catch this; everything below refines it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input JSON for a ball union was syntactically or semantically invalid.
class BubbleParseError : public Error {
 public:
  using Error::Error;
};

// A sampling pass retained no points (e.g. the whole sample missed the body).
class ZeroRetained : public Error {
 public:
  using Error::Error;
};

// A point handed to a basis evaluation lies outside the basis box beyond the
// tolerated round-off slack.
class PointOutsideBox : public Error {
 public:
  using Error::Error;
};

// Triangular solve hit a diagonal entry too small to divide by.
class SingularTriangular : public Error {
 public:
  using Error::Error;
};

// The NNLS active-set loop stopped making progress.
class DegenerateCycle : public Error {
 public:
  using Error::Error;
};

// Rank-revealing basis selection found no usable column at all.
class RankZero : public Error {
 public:
  using Error::Error;
};

// An integrand produced NaN or +/-inf at a node.
class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

}  // namespace ballquad
