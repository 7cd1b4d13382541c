#include "anharm/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "anharm/error.hpp"

namespace anharm::quad {
namespace {

// Kronrod 15-point abscissae (positive half) and weights; the Gauss 7-point
// rule uses the odd-indexed abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double a = 0.0;
  double b = 0.0;
  cplx value;
  double err = 0.0;
  double resabs = 0.0;
};

Panel gauss_kronrod(const RealIntegrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const cplx fc = f(center);
  cplx kronrod = fc * kWgk[7];
  cplx gauss = fc * kWg[3];
  double resabs = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const cplx f1 = f(center - dx);
    const cplx f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = kronrod * half;
  p.resabs = resabs * std::abs(half);
  p.err = std::abs((kronrod - gauss) * half);
  return p;
}

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(cplx x) {
    add_part(re_, cre_, x.real());
    add_part(im_, cim_, x.imag());
  }
  cplx value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double re_ = 0.0, cre_ = 0.0, im_ = 0.0, cim_ = 0.0;
};

}  // namespace

QuadResult integrate_interval(const RealIntegrand& f, double a, double b, const QuadOptions& opts) {
  if (!(a < b)) throw Error(ErrorKind::config_error, "integrate_interval requires a < b");
  std::vector<Panel> panels;
  panels.reserve(64);
  panels.push_back(gauss_kronrod(f, a, b));
  std::size_t evaluations = 15;

  auto by_error = [&panels](std::size_t i, std::size_t j) { return panels[i].err < panels[j].err; };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_error)> worst(by_error);
  worst.push(0);

  const double min_width = 64.0 * kEps * std::max(std::abs(a), std::abs(b));
  while (true) {
    CompensatedSum total;
    double err = 0.0, resabs = 0.0;
    for (const Panel& p : panels) {
      total.add(p.value);
      err += p.err;
      resabs += p.resabs;
    }
    const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(total.value()));
    if (err <= target || err <= 100.0 * kEps * resabs) {
      // deterministic reduction: position order
      std::vector<Panel> ordered = panels;
      std::sort(ordered.begin(), ordered.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
      CompensatedSum sum;
      for (const Panel& p : ordered) sum.add(p.value);
      return {sum.value(), err, evaluations};
    }
    if (panels.size() >= opts.max_panels || worst.empty()) {
      std::ostringstream os;
      os << "error estimate " << err << " above target " << target << " after " << panels.size() << " panels";
      throw Error(ErrorKind::tolerance_not_met, os.str());
    }
    // Bisect the worst panels until the estimate could plausibly meet the
    // target; recomputing the totals after every split is wasteful.
    double removed = 0.0;
    do {
      const std::size_t i = worst.top();
      worst.pop();
      const Panel p = panels[i];
      const double mid = 0.5 * (p.a + p.b);
      if (p.b - p.a <= min_width) {
        panels[i].err = 0.0;  // cannot refine further; accept the rounding-level panel
        continue;
      }
      panels[i] = gauss_kronrod(f, p.a, mid);
      panels.push_back(gauss_kronrod(f, mid, p.b));
      evaluations += 30;
      worst.push(i);
      worst.push(panels.size() - 1);
      removed += p.err - panels[i].err - panels.back().err;
    } while (!worst.empty() && err - removed > target && panels.size() < opts.max_panels &&
             panels[worst.top()].err > 0.5 * (err - removed) / static_cast<double>(panels.size()));
  }
}

QuadResult integrate_interval(const RealIntegrand& f, double a, double b, double tol) {
  QuadOptions opts;
  opts.rel_tol = tol;
  opts.abs_tol = tol;
  return integrate_interval(f, a, b, opts);
}

QuadResult integrate_ray(const RealIntegrand& f, double tol, double decay_threshold, double start,
                         double first_panel) {
  CompensatedSum acc;
  QuadResult out;
  double lo = start;
  double width = first_panel;
  for (int doubling = 0; doubling <= 60; ++doubling) {
    QuadOptions opts;
    opts.rel_tol = tol;
    opts.abs_tol = tol * std::max(std::abs(acc.value()), 1e-300);
    const QuadResult panel = integrate_interval(f, lo, lo + width, opts);
    acc.add(panel.value);
    out.err_estimate += panel.err_estimate;
    out.evaluations += panel.evaluations;
    const double magnitude = std::abs(acc.value());
    if (doubling > 0 && magnitude > 0.0 && std::abs(panel.value) <= decay_threshold * magnitude) {
      out.value = acc.value();
      out.err_estimate += std::abs(panel.value);
      return out;
    }
    lo += width;
    if (doubling > 0) width *= 2.0;
  }
  throw Error(ErrorKind::no_decay_detected, "integrand did not decay within 60 doublings");
}

QuadResult integrate_segment(const ComplexIntegrand& f, cplx a, cplx b, double tol) {
  const cplx delta = b - a;
  return integrate_interval([&](double s) { return f(a + s * delta) * delta; }, 0.0, 1.0, tol);
}

}  // namespace anharm::quad
