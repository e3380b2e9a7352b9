#pragma once

#include <optional>
#include <random>
#include <vector>

#include "v2x/evt.hpp"

namespace v2x {

struct ArrivalConfig {
  double lambda_avg_bps = 0.5e6;
};

struct QueueThresholds {
  double m_th = 225e3;   // bits
  double b_th = 2.9e10;  // bits^2
};

struct VirtualQueuePair {
  double q_m = 0.0;
  double q_b = 0.0;
};

// Second-moment budget implied by the entropic-risk parameters.
double risk_to_thresholds(double delta, double kappa_bits, double m_th_bits);

// Bits arriving at one pair in one slot: Poisson with mean lambda_avg * t_c
// (unit-bit packets, so the draw is directly in bits).
double sample_arrivals(std::mt19937_64& rng, const ArrivalConfig& cfg,
                       double t_c_s);

double update_queue(double q_bits, double arrivals_bits, double rate_bps,
                    double t_c_s);

void update_virtual_global(VirtualQueuePair& vq, double m_next_bits,
                           const QueueThresholds& th);

// Local variant: the increments are gated by the fitted-support indicator at
// q_next; an unavailable estimate counts as inside support.
void update_virtual_local(VirtualQueuePair& vq, double q_next_bits,
                          const std::optional<GevParams>& gev,
                          const QueueThresholds& th);

double network_max(const std::vector<double>& q_bits);

}  // namespace v2x
