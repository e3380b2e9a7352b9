#include "v2x/evt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "v2x/mathx.hpp"

namespace v2x {

namespace {
constexpr double kGumbelEps = 1e-6;  // |xi| below this routes to Gumbel forms
}

void QueueHistory::push(double x) {
  sorted_.insert(std::upper_bound(sorted_.begin(), sorted_.end(), x), x);
}

QueueHistory QueueHistory::from_samples(std::vector<double> samples) {
  QueueHistory h;
  std::sort(samples.begin(), samples.end());
  h.sorted_ = std::move(samples);
  return h;
}

double QueueHistory::quantile(double p) const {
  if (sorted_.empty()) throw std::domain_error("quantile of empty history");
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument("quantile probability must lie in (0, 1)");
  }
  const auto n = sorted_.size();
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  rank = std::max<std::size_t>(1, std::min(rank, n));
  return sorted_[rank - 1];
}

ExcessMoments excess_moments(const QueueHistory& history, double d) {
  const auto& v = history.sorted();
  auto it = std::upper_bound(v.begin(), v.end(), d);
  ExcessMoments em;
  for (; it != v.end(); ++it) {
    const double s = *it - d;
    em.mean += s;
    em.second += s * s;
    ++em.count;
  }
  if (em.count > 0) {
    em.mean /= static_cast<double>(em.count);
    em.second /= static_cast<double>(em.count);
  }
  return em;
}

GpdParams gpd_from_moments(double mean_excess, double second_moment_excess) {
  const double denom = 2.0 * (second_moment_excess - mean_excess * mean_excess);
  if (!(denom > 0.0)) {
    throw std::domain_error("gpd_from_moments: degenerate excess sample");
  }
  GpdParams p;
  p.xi = (second_moment_excess - 2.0 * mean_excess * mean_excess) / denom;
  p.sigma_tilde = second_moment_excess * mean_excess / denom;
  return p;
}

std::optional<GevParams> estimate_gev_local(const QueueHistory& history,
                                            double psi, int k_pairs,
                                            int min_exceedances) {
  if (!(psi > 0.0) || psi >= 1.0) {
    throw std::invalid_argument("psi must lie in (0, 1)");
  }
  if (k_pairs < 2) throw std::invalid_argument("k_pairs must be >= 2");
  if (history.size() == 0) return std::nullopt;

  const double d = history.quantile(1.0 - psi);
  const ExcessMoments em = excess_moments(history, d);
  if (em.count < static_cast<std::size_t>(min_exceedances)) return std::nullopt;

  GpdParams gpd;
  try {
    gpd = gpd_from_moments(em.mean, em.second);
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
  const double mu = history.quantile(1.0 - 1.0 / k_pairs);
  const double sigma = gpd.sigma_tilde + gpd.xi * (mu - d);
  if (!(sigma > 0.0)) return std::nullopt;
  return GevParams{mu, sigma, gpd.xi};
}

double gev_cdf(double m, const GevParams& params) {
  const double z = (m - params.mu) / params.sigma;
  if (std::fabs(params.xi) < kGumbelEps) {
    return std::exp(-std::exp(-z));
  }
  const double t = 1.0 + params.xi * z;
  if (t <= 0.0) return params.xi > 0.0 ? 0.0 : 1.0;
  return std::exp(-std::pow(t, -1.0 / params.xi));
}

bool gev_support_contains(double x, const GevParams& params) {
  if (std::fabs(params.xi) < kGumbelEps) return true;
  return 1.0 + params.xi * (x - params.mu) / params.sigma >= 0.0;
}

std::pair<double, double> gev_mean_var(const GevParams& params) {
  const double s = params.sigma;
  const double xi = params.xi;
  if (std::fabs(xi) < kGumbelEps) {
    return {params.mu + s * kEulerGamma, M_PI * M_PI * s * s / 6.0};
  }
  if (xi >= 1.0) throw std::domain_error("gev mean undefined for xi >= 1");
  const double g1 = std::tgamma(1.0 - xi);
  const double mean = params.mu + s * (g1 - 1.0) / xi;
  if (xi >= 0.5) throw std::domain_error("gev variance undefined for xi >= 1/2");
  const double g2 = std::tgamma(1.0 - 2.0 * xi);
  const double var = s * s * (g2 - g1 * g1) / (xi * xi);
  return {mean, var};
}

double ks_distance(const std::vector<double>& sorted_samples,
                   const GevParams& params) {
  const auto n = sorted_samples.size();
  if (n == 0) throw std::domain_error("ks_distance: empty sample");
  double ks = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = gev_cdf(sorted_samples[i], params);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
    const double lo = static_cast<double>(i) / static_cast<double>(n);
    ks = std::max(ks, std::max(std::fabs(f - hi), std::fabs(f - lo)));
  }
  return ks;
}

}  // namespace v2x
