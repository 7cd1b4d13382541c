#include "anharm/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "anharm/asym.hpp"
#include "anharm/error.hpp"

namespace anharm::semigroup {
namespace {

double slope(const std::vector<double>& x, const std::vector<double>& y, std::size_t from, std::size_t to) {
  const double count = static_cast<double>(to - from);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = from; i < to; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= count;
  my /= count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = from; i < to; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

double log_sum_exp(const std::vector<double>& v, std::size_t from) {
  double top = -INFINITY;
  for (std::size_t i = from; i < v.size(); ++i) top = std::max(top, v[i]);
  double sum = 0.0;
  for (std::size_t i = from; i < v.size(); ++i) sum += std::exp(v[i] - top);
  return top + std::log(sum);
}

std::vector<double> as_double(const std::vector<int>& n) { return {n.begin(), n.end()}; }

// Slope model for m = 2: the n-coefficient of log kappa_n - t Re lambda_n is
// a - t b. Both series are fitted on (n, log n, 1[, 1/n]) so that power-law
// prefactors and 1/n corrections of kappa_n do not bias a.
struct LinearSlope {
  double a = 0.0;
  double b = 0.0;
  double zero() const { return a / b; }
};

double n_coefficient(const std::vector<int>& n, const std::vector<double>& y, std::size_t from, std::size_t to,
                     bool inverse_term) {
  const Eigen::Index rows = static_cast<Eigen::Index>(to - from);
  Eigen::MatrixXd design(rows, inverse_term ? 4 : 3);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double x = n[from + i];
    design(i, 0) = x;
    design(i, 1) = std::log(x);
    design(i, 2) = 1.0;
    if (inverse_term) design(i, 3) = 1.0 / x;
    rhs(i) = y[from + i];
  }
  return design.colPivHouseholderQr().solve(rhs)(0);
}

LinearSlope slope_model(const SeriesTable& table, std::size_t from, std::size_t to, bool inverse_term) {
  if (to - from < 6) throw Error(ErrorKind::degenerate_fit, "threshold scan needs at least 6 points per fit");
  return {n_coefficient(table.n, table.log_kappa, from, to, inverse_term),
          n_coefficient(table.n, table.re_lambda, from, to, inverse_term)};
}

}  // namespace

std::vector<int> default_indices(const OperatorSpec& spec) {
  std::vector<int> out;
  if (spec.is_airy()) {
    for (int i = 0; i <= 60; ++i) {
      const int n = static_cast<int>(std::lround(std::pow(1e6, i / 60.0)));
      if (out.empty() || n > out.back()) out.push_back(n);
    }
    return out;
  }
  const int n_max = *spec.k == 1 ? 80 : 64;
  for (int n = 1; n <= n_max; ++n) out.push_back(n);
  return out;
}

SeriesTable build_table(const OperatorSpec& spec, const std::vector<int>& indices,
                        const spectra::DiscretizationConfig& config) {
  if (indices.size() < 4) throw Error(ErrorKind::config_error, "series table needs at least 4 indices");
  SeriesTable table;
  table.spec = spec;
  for (const InstabilityRecord& r : spectra::kappa_auto(spec, indices, config)) {
    table.n.push_back(r.n);
    table.log_kappa.push_back(r.log_kappa);
    table.re_lambda.push_back(r.lambda.real());
  }
  return table;
}

SeriesReport term_norms(const SeriesTable& table, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::config_error, "t must be positive");
  SeriesReport report;
  report.t = t;
  report.n = table.n;
  for (std::size_t i = 0; i < table.n.size(); ++i) report.log_term.push_back(table.log_kappa[i] - t * table.re_lambda[i]);
  const std::size_t count = table.n.size();
  const std::size_t from = count - std::max<std::size_t>(3, count / 4);
  report.tail_slope = slope(as_double(table.n), report.log_term, from, count);
  report.divergent = report.tail_slope > 0.0;
  report.log_tail_sum = report.divergent ? INFINITY : log_sum_exp(report.log_term, 0);
  return report;
}

std::string ThresholdScan::bracketed() const {
  if (brackets_T && brackets_half) return "both";
  if (brackets_T) return "T";
  if (brackets_half) return "T/2";
  return "neither";
}

ThresholdScan threshold_scan(const SeriesTable& table, double t0, double t1) {
  if (table.spec.is_airy() || *table.spec.k != 1) {
    throw Error(ErrorKind::config_error, "threshold scan applies to m = 2 only");
  }
  if (!(t0 < t1) || t0 < 0.0) throw Error(ErrorKind::config_error, "need 0 <= t0 < t1");
  const std::size_t count = table.n.size();
  const LinearSlope model = slope_model(table, count / 2, count, true);
  auto sign_at = [&model](double t) { return model.a - t * model.b > 0.0; };
  if (sign_at(t0) == sign_at(t1)) {
    std::ostringstream os;
    os << "term-norm slope has the same sign at t = " << t0 << " and t = " << t1;
    throw Error(ErrorKind::no_sign_change, os.str());
  }
  double lo = t0, hi = t1;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (sign_at(mid) == sign_at(lo) ? lo : hi) = mid;
  }
  ThresholdScan scan;
  scan.estimate = 0.5 * (lo + hi);
  const double no_inverse = slope_model(table, count / 2, count, false).zero();
  const double wider = slope_model(table, count / 4, count, true).zero();
  const double spread = std::max({std::abs(scan.estimate - no_inverse), std::abs(scan.estimate - wider),
                                  1e-12 * scan.estimate});
  scan.lo = scan.estimate - spread;
  scan.hi = scan.estimate + spread;
  scan.candidate_T = asym::T(table.spec.theta);
  scan.candidate_half = 0.5 * scan.candidate_T;
  scan.brackets_T = scan.lo <= scan.candidate_T && scan.candidate_T <= scan.hi;
  scan.brackets_half = scan.lo <= scan.candidate_half && scan.candidate_half <= scan.hi;
  return scan;
}

RemainderFit remainder_shape(const SeriesTable& table, const std::vector<int>& N_list, double t) {
  if (N_list.size() < 2) throw Error(ErrorKind::config_error, "need at least two values of N");
  for (std::size_t i = 1; i < table.n.size(); ++i) {
    if (table.n[i] != table.n[i - 1] + 1) throw Error(ErrorKind::config_error, "table indices must be consecutive");
  }
  const SeriesReport terms = term_norms(table, t);
  if (terms.divergent) throw Error(ErrorKind::insufficient_decay, "term norms increase; no remainder to fit");
  RemainderFit fit;
  fit.t = t;
  for (int N : N_list) {
    if (N < table.n.front() || N > table.n.back()) throw Error(ErrorKind::config_error, "N outside the table");
    fit.N.push_back(N);
    fit.log_tail.push_back(log_sum_exp(terms.log_term, static_cast<std::size_t>(N - table.n.front())));
  }
  const double smallest_tail = *std::min_element(fit.log_tail.begin(), fit.log_tail.end());
  if (terms.log_term.back() - smallest_tail > std::log(1e-6)) {
    throw Error(ErrorKind::insufficient_decay, "last tabulated term is not negligible against the tail");
  }
  fit.fitted_rate = slope(as_double(fit.N), fit.log_tail, 0, fit.N.size());

  const double theta = table.spec.theta;
  if (!table.spec.is_airy() && *table.spec.k == 1) {
    const double T = asym::T(theta);
    fit.predicted_T = -2.0 * std::cos(theta / 2.0) * (t - T);
    fit.predicted_half = -2.0 * std::cos(theta / 2.0) * (t - 0.5 * T);
    fit.predicted = fit.predicted_half;
  } else if (!table.spec.is_airy()) {
    const int mid = fit.N[fit.N.size() / 2] - table.n.front();
    const int next = std::min<int>(mid + 1, static_cast<int>(table.n.size()) - 1);
    const double d_re = table.re_lambda[next] - table.re_lambda[next - 1];
    fit.predicted = asym::c_k(*table.spec.k, theta) - t * d_re;
  }
  return fit;
}

}  // namespace anharm::semigroup
