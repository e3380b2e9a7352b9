#include "v2x/queueing.hpp"

#include <algorithm>
#include <stdexcept>

#include "v2x/mathx.hpp"

namespace v2x {

double risk_to_thresholds(double delta, double kappa_bits, double m_th_bits) {
  if (delta <= 0.0) throw std::invalid_argument("delta must be > 0");
  if (!(kappa_bits > m_th_bits)) {
    throw std::invalid_argument("kappa_bits must exceed m_th_bits");
  }
  return 2.0 * (kappa_bits - m_th_bits) / delta;
}

double sample_arrivals(std::mt19937_64& rng, const ArrivalConfig& cfg,
                       double t_c_s) {
  if (cfg.lambda_avg_bps < 0.0) throw std::invalid_argument("lambda_avg_bps < 0");
  const double mean_bits = cfg.lambda_avg_bps * t_c_s;
  if (mean_bits == 0.0) return 0.0;
  return static_cast<double>(rng_poisson(rng, mean_bits));
}

double update_queue(double q_bits, double arrivals_bits, double rate_bps,
                    double t_c_s) {
  return std::max(q_bits + arrivals_bits - t_c_s * rate_bps, 0.0);
}

void update_virtual_global(VirtualQueuePair& vq, double m_next_bits,
                           const QueueThresholds& th) {
  vq.q_m = std::max(vq.q_m + m_next_bits - th.m_th, 0.0);
  vq.q_b = std::max(vq.q_b + m_next_bits * m_next_bits - th.b_th, 0.0);
}

void update_virtual_local(VirtualQueuePair& vq, double q_next_bits,
                          const std::optional<GevParams>& gev,
                          const QueueThresholds& th) {
  const bool inside = !gev || gev_support_contains(q_next_bits, *gev);
  const double inc_m = inside ? q_next_bits - th.m_th : 0.0;
  const double inc_b = inside ? q_next_bits * q_next_bits - th.b_th : 0.0;
  vq.q_m = std::max(vq.q_m + inc_m, 0.0);
  vq.q_b = std::max(vq.q_b + inc_b, 0.0);
}

double network_max(const std::vector<double>& q_bits) {
  if (q_bits.empty()) throw std::invalid_argument("network_max of empty network");
  return *std::max_element(q_bits.begin(), q_bits.end());
}

}  // namespace v2x
