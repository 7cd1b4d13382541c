#pragma once

// Normal convergence of sum_n exp(-t lambda_n) Pi_n through the term norms
// exp(-t Re lambda_n) kappa_n, all in log space.
//
// The tail sum of term norms is a triangle-inequality surrogate for
// ||exp(-tA)(I - Pi_{<N})||; the operator norm itself is not computed.

#include <cmath>
#include <string>
#include <vector>

#include "anharm/spectra.hpp"

namespace anharm::semigroup {

struct SeriesTable {
  OperatorSpec spec;
  std::vector<int> n;
  std::vector<double> log_kappa;
  std::vector<double> re_lambda;
};

/// Indices used when none are given: m = 1 geometric up to 10^6 (the
/// divergence at large t only shows for n of order 10^5), m = 2 1..80,
/// m >= 4 1..64.
std::vector<int> default_indices(const OperatorSpec& spec);

/// kappa_n and Re lambda_n from the cancellation-free routes.
SeriesTable build_table(const OperatorSpec& spec, const std::vector<int>& indices,
                        const spectra::DiscretizationConfig& config = {});

struct SeriesReport {
  double t = 0.0;
  std::vector<int> n;
  std::vector<double> log_term;  // log kappa_n - t Re lambda_n
  double tail_slope = 0.0;       // least-squares slope over the last quartile
  bool divergent = false;        // tail slope > 0
  double log_tail_sum = 0.0;     // log of the sum of all listed terms; inf if divergent
};

SeriesReport term_norms(const SeriesTable& table, double t);

struct ThresholdScan {
  double estimate = 0.0;
  double lo = 0.0, hi = 0.0;   // bracket
  double candidate_T = 0.0;    // c_1 / cos(theta/2)
  double candidate_half = 0.0; // c_1 / (2 cos(theta/2))
  bool brackets_T = false;
  bool brackets_half = false;

  std::string bracketed() const;
};

/// Zero of the n-slope of log kappa_n - t Re lambda_n for m = 2, located by
/// bisection on [t0, t1]. Slopes come from least squares on (n, log n, 1, 1/n)
/// over the upper half of the table. The bracket half-width is the largest
/// change of the estimate when the 1/n column is dropped or the fit starts at
/// the first quarter. Throws Error(no_sign_change) when [t0, t1] misses the
/// transition.
ThresholdScan threshold_scan(const SeriesTable& table, double t0, double t1);

struct RemainderFit {
  double t = 0.0;
  std::vector<int> N;
  std::vector<double> log_tail;
  double fitted_rate = 0.0;
  // k = 1: -2 cos(theta/2) (t - T) and the same with T/2
  double predicted_T = NAN;
  double predicted_half = NAN;
  // k >= 2: c_k - t dRe(lambda)/dn at the middle of N
  double predicted = 0.0;
};

/// Fits log sum_{n >= N} exp(-t Re lambda_n) kappa_n against N. The table
/// must hold consecutive n; throws Error(insufficient_decay) when its last
/// term is not negligible against the smallest tail.
RemainderFit remainder_shape(const SeriesTable& table, const std::vector<int>& N_list, double t);

}  // namespace anharm::semigroup
