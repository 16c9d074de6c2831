#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sharpbounds {

/// Base class of every error raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input could not be parsed (files, rows, malformed flags). Distinct from
/// domain errors so callers can map it to a different exit status.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A record with a non-binary exposure or outcome value. `row` is the
/// 0-based index in the record stream, or the 1-based file line when the
/// record came from a CSV file (stated in the message).
class MalformedRow : public ParseError {
 public:
  MalformedRow(std::size_t row, const std::string& what)
      : ParseError(what), row(row) {}
  std::size_t row;
};

/// A value outside [0,1] beyond tolerance was used as a probability.
class InvalidProbability : public Error {
 public:
  explicit InvalidProbability(double value);
  double value;
};

/// Sensitivity parameters rejected against the feasible region.
class InfeasibleParams : public Error {
 public:
  using Error::Error;
};

/// M outside [M*, 1]. `boundary` is the violated endpoint.
class InfeasibleM : public InfeasibleParams {
 public:
  InfeasibleM(double big_m, double boundary, const std::string& what)
      : InfeasibleParams(what), big_m(big_m), boundary(boundary) {}
  double big_m;
  double boundary;
};

/// m outside [0, m*]. `boundary` is the violated endpoint.
class InfeasibleSmallM : public InfeasibleParams {
 public:
  InfeasibleSmallM(double m, double boundary, const std::string& what)
      : InfeasibleParams(what), m(m), boundary(boundary) {}
  double m;
  double boundary;
};

/// m > M.
class InvertedParams : public InfeasibleParams {
 public:
  InvertedParams(double m, double big_m);
  double m;
  double big_m;
};

/// Witness slack outside the open interval (0, 1).
class EpsilonOutOfRange : public Error {
 public:
  explicit EpsilonOutOfRange(double epsilon);
  double epsilon;
};

/// A continuous parameter distribution was bound to a zero-length interval.
class DegenerateSupport : public Error {
 public:
  DegenerateSupport(double lo, double hi);
  double lo;
  double hi;
};

/// A contrast hit an indeterminate form (0/0, inf/inf, inf-inf).
class IndeterminateContrast : public Error {
 public:
  IndeterminateContrast() : Error("indeterminate contrast (0/0, inf/inf or inf-inf form)") {}
  explicit IndeterminateContrast(const std::string& what) : Error(what) {}
};

/// A custom contrast failed the monotonicity spot-check.
class NonMonotoneContrast : public Error {
 public:
  using Error::Error;
};

/// A 2x2 table or record stream with an empty exposure arm.
class EmptyArm : public Error {
 public:
  explicit EmptyArm(int exposure);
  int exposure;
};

}  // namespace sharpbounds
