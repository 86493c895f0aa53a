#pragma once

#include "ouvg/types.hpp"

namespace ouvg {

/// Real dilogarithm Li2(x) = -\int_0^x log(1-y)/y dy for x <= 1.
/// Throws DomainError for x > 1.
double dilog(double x);

/// Principal branch of the complex dilogarithm, cut along [1, inf).
/// Arguments on the cut (including z = 1) are rejected with DomainError.
Complex dilog(Complex z);

/// Principal branch of log Gamma(z), continuous away from the negative real
/// axis. Throws DomainError at the poles 0, -1, -2, ...
Complex log_gamma(Complex z);

}  // namespace ouvg
