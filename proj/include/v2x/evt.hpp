#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace v2x {

struct GpdParams {
  double sigma_tilde = 0.0;
  double xi = 0.0;
  double threshold_d = 0.0;
};

struct GevParams {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;
};

// Sorted sample log of one pair's queue process. Quantiles use the
// nearest-rank convention (the ceil(p*n)-th order statistic).
class QueueHistory {
 public:
  void push(double x);
  std::size_t size() const { return sorted_.size(); }
  double quantile(double p) const;
  const std::vector<double>& sorted() const { return sorted_; }
  static QueueHistory from_samples(std::vector<double> samples);

 private:
  std::vector<double> sorted_;
};

struct ExcessMoments {
  double mean = 0.0;    // E[S],  S = X - d for samples X > d
  double second = 0.0;  // E[S^2]
  std::size_t count = 0;
};

ExcessMoments excess_moments(const QueueHistory& history, double d);

// Moment-matching threshold-excess fit. Throws std::domain_error when the
// excess variance is not strictly positive.
GpdParams gpd_from_moments(double mean_excess, double second_moment_excess);

// Quantile-anchored local fit: threshold at the (1-psi) quantile, shape/scale
// from the excess moments, location at the (1-1/K) quantile. Returns nullopt
// while the tail sample is too small or degenerate.
std::optional<GevParams> estimate_gev_local(const QueueHistory& history,
                                            double psi, int k_pairs,
                                            int min_exceedances = 20);

double gev_cdf(double m, const GevParams& params);

// 1 + xi*(x - mu)/sigma >= 0 (always true in the Gumbel limit).
bool gev_support_contains(double x, const GevParams& params);

// Mean and variance; throws std::domain_error when the requested moment does
// not exist (xi >= 1, resp. xi >= 1/2).
std::pair<double, double> gev_mean_var(const GevParams& params);

// Two-sided Kolmogorov-Smirnov distance between an (ascending sorted) sample
// and a fitted distribution.
double ks_distance(const std::vector<double>& sorted_samples,
                   const GevParams& params);

}  // namespace v2x
