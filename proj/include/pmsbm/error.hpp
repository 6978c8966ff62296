#pragma once

#include <stdexcept>
#include <string>

namespace pmsbm {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument does not hold (out-of-range probability,
// mismatched vertex counts, malformed size vector, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed graph, labelling or config text.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A modelling assumption required by a bound or operation fails, e.g. the
// ordering of class sizes across class counts.
class AssumptionViolation : public Error {
 public:
  using Error::Error;
};

// The requested computation exceeds a configured cap (enumeration size,
// permutation search width).
class Infeasible : public Error {
 public:
  using Error::Error;
};

// Posterior odds with both set masses equal to zero.
class UndefinedOdds : public Error {
 public:
  using Error::Error;
};

// Hypothesis sets of an odds test share a labelling.
class NotDisjoint : public Error {
 public:
  using Error::Error;
};

}  // namespace pmsbm
