#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature for complex-valued integrands on
// intervals, semi-infinite rays and straight complex segments.

#include <complex>
#include <cstddef>
#include <functional>

#include "anharm/model.hpp"

namespace anharm::quad {

using RealIntegrand = std::function<cplx(double)>;
using ComplexIntegrand = std::function<cplx(cplx)>;

struct QuadResult {
  cplx value;
  double err_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct QuadOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  std::size_t max_panels = 100000;
};

/// Globally adaptive bisection; converged once the summed panel error is
/// below max(abs_tol, rel_tol * |value|). Throws Error(tolerance_not_met)
/// when the panel budget is exhausted.
QuadResult integrate_interval(const RealIntegrand& f, double a, double b, const QuadOptions& opts);
QuadResult integrate_interval(const RealIntegrand& f, double a, double b, double tol = 1e-12);

/// Integral over [start, inf) on panels [start, start+T0], then doubling
/// lengths, until the last panel contributes below
/// decay_threshold * |accumulated|. Throws Error(no_decay_detected) after 60
/// doublings.
QuadResult integrate_ray(const RealIntegrand& f, double tol = 1e-12, double decay_threshold = 1e-16,
                         double start = 0.0, double first_panel = 1.0);

/// Integral of f along t = a + s (b - a), s in [0, 1].
QuadResult integrate_segment(const ComplexIntegrand& f, cplx a, cplx b, double tol = 1e-12);

}  // namespace anharm::quad
