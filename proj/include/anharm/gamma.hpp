#pragma once

namespace anharm::asym {

/// Gamma function for real x > 0 (Lanczos, g = 7, nine terms; relative error
/// below 1e-14 on the arguments used here). Reflection handles x < 1/2.
double gamma(double x);
double log_gamma(double x);

}  // namespace anharm::asym
