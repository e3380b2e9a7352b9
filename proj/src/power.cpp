#include "v2x/power.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "v2x/mathx.hpp"

namespace v2x {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

double PowerDecision::total() const {
  return std::accumulate(p.begin(), p.end(), 0.0);
}

double weight_rsu(const VirtualQueuePair& vq_global, double q_k,
                  double lambda_k, double w, double t_c) {
  if (q_k < 0.0 || lambda_k < 0.0 || vq_global.q_m < 0.0 || vq_global.q_b < 0.0)
    throw std::invalid_argument("weight_rsu: negative input");
  const double qa = q_k + lambda_k;
  return w * t_c *
         (vq_global.q_m + (2.0 * vq_global.q_b + 1.0) * qa + 2.0 * cube(qa));
}

double weight_evt(const VirtualQueuePair& vq_local, double q_k,
                  double lambda_k, const std::optional<GevParams>& gev,
                  double w, double t_c) {
  if (q_k < 0.0 || lambda_k < 0.0 || vq_local.q_m < 0.0 || vq_local.q_b < 0.0)
    throw std::invalid_argument("weight_evt: negative input");
  const double qa = q_k + lambda_k;
  const bool inside = !gev || gev_support_contains(qa, *gev);
  double j = w * t_c * qa;
  if (inside) {
    j += w * t_c *
         (vq_local.q_m + (2.0 * vq_local.q_b + 1.0) * qa + 2.0 * cube(qa));
  }
  return j;
}

PowerDecision waterfill(double j_k, double v, std::span<const double> gains,
                        double noise_plus_i, double budget) {
  if (j_k < 0.0) throw std::invalid_argument("waterfill: j_k < 0");
  if (v < 0.0) throw std::invalid_argument("waterfill: v < 0");
  if (budget <= 0.0) throw std::invalid_argument("waterfill: budget <= 0");
  if (noise_plus_i <= 0.0)
    throw std::invalid_argument("waterfill: noise_plus_i <= 0");
  for (double h : gains)
    if (h < 0.0) throw std::invalid_argument("waterfill: negative gain");

  PowerDecision out;
  out.p.assign(gains.size(), 0.0);
  if (j_k == 0.0 || gains.empty()) return out;
  const double h_max = *std::max_element(gains.begin(), gains.end());
  if (h_max <= 0.0) return out;

  // cost c_n = noise_plus_i / h_n; RB n is active iff c_n < j/((v+eta)ln2)
  std::vector<double> cost(gains.size(), 0.0);
  for (std::size_t n = 0; n < gains.size(); ++n)
    cost[n] = gains[n] > 0.0 ? noise_plus_i / gains[n] : 0.0;

  auto total_at = [&](double v_plus_eta) {
    const double level = j_k / (v_plus_eta * kLn2);
    double s = 0.0;
    for (std::size_t n = 0; n < gains.size(); ++n)
      if (gains[n] > 0.0 && cost[n] < level) s += level - cost[n];
    return s;
  };

  double eta = 0.0;
  if (!(v > 0.0) || total_at(v) > budget) {
    // budget binds: bisect eta, then pin the active set and solve exactly
    double lo = 0.0, hi = j_k * h_max / (noise_plus_i * kLn2);
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      (total_at(v + mid) > budget ? lo : hi) = mid;
    }
    double v_plus_eta = v + 0.5 * (lo + hi);
    for (std::size_t pass = 0; pass < gains.size() + 2; ++pass) {
      const double level = j_k / (v_plus_eta * kLn2);
      std::size_t m = 0;
      double cost_sum = 0.0;
      for (std::size_t n = 0; n < gains.size(); ++n) {
        if (gains[n] > 0.0 && cost[n] < level) {
          ++m;
          cost_sum += cost[n];
        }
      }
      if (m == 0) break;
      const double refined =
          j_k * static_cast<double>(m) / (kLn2 * (budget + cost_sum));
      if (refined == v_plus_eta) break;
      v_plus_eta = refined;
    }
    eta = std::max(v_plus_eta - v, 0.0);
  }

  const double level = j_k / ((v + eta) * kLn2);
  double rate_term = 0.0;
  double spent = 0.0;
  for (std::size_t n = 0; n < gains.size(); ++n) {
    if (gains[n] > 0.0 && cost[n] < level) {
      out.p[n] = level - cost[n];
      spent += out.p[n];
      rate_term +=
          std::log2(1.0 + out.p[n] * gains[n] / noise_plus_i);
    }
  }
  out.eta = eta;
  out.objective = j_k * rate_term - v * spent;
  return out;
}

}  // namespace v2x
