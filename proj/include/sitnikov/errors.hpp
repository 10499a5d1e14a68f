#pragma once

#include <stdexcept>
#include <string>

namespace sitnikov {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Kepler's equation did not converge within the iteration cap.
class SolverFailure : public Error {
 public:
  SolverFailure(double t, double e, double residual);

  double t;
  double e;
  double residual;
};

/// The adaptive integrator could not continue (step-size underflow or step cap).
class IntegrationFailure : public Error {
 public:
  IntegrationFailure(const std::string& what, double last_time);

  double last_time;
};

/// A circular-catalog root could not be bracketed.
class CatalogError : public Error {
 public:
  CatalogError(const std::string& what, int p);

  int p;
};

/// A bound-ledger constant could not be formed (bracketing failure, restriction violated).
class LedgerError : public Error {
 public:
  using Error::Error;
};

/// dF/dxi fell below the near-fold threshold; the continuation equation is undefined.
class NearFoldError : public Error {
 public:
  NearFoldError(double e, double xi, double dF_dxi);

  double e;
  double xi;
  double dF_dxi;
};

/// A stability computation was asked for data the Hill context does not hold.
class ContextError : public Error {
 public:
  using Error::Error;
};

}  // namespace sitnikov
