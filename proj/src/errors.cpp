#include "sitnikov/errors.hpp"

#include <cstdio>

namespace sitnikov {

namespace {

std::string format_kepler(double t, double e, double residual) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "Kepler solver failed at t=%.17g e=%.17g (residual %.3e)", t, e,
                residual);
  return buf;
}

std::string format_fold(double e, double xi, double d) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "near fold at e=%.17g xi=%.17g (dF/dxi=%.3e)", e, xi, d);
  return buf;
}

}  // namespace

SolverFailure::SolverFailure(double t_, double e_, double residual_)
    : Error(format_kepler(t_, e_, residual_)), t(t_), e(e_), residual(residual_) {}

IntegrationFailure::IntegrationFailure(const std::string& what, double last_time_)
    : Error(what + " (last accepted t=" + std::to_string(last_time_) + ")"), last_time(last_time_) {}

CatalogError::CatalogError(const std::string& what, int p_)
    : Error(what + " (p=" + std::to_string(p_) + ")"), p(p_) {}

NearFoldError::NearFoldError(double e_, double xi_, double d)
    : Error(format_fold(e_, xi_, d)), e(e_), xi(xi_), dF_dxi(d) {}

}  // namespace sitnikov
