#pragma once

#include <optional>
#include <span>
#include <vector>

#include "v2x/evt.hpp"
#include "v2x/queueing.hpp"

namespace v2x {

// Outcome of the per-pair water-filling problem.  `p` has one entry per
// resource block handed to the solver (the caller scatters back into the
// full RB grid); `eta` is the budget multiplier, `objective` the value of
// the weighted-rate-minus-power objective at the returned allocation.
struct PowerDecision {
  std::vector<double> p;
  double eta = 0.0;
  double objective = 0.0;

  double total() const;
};

// Weight/tradeoff bundle for one pair and slot.
struct LyapunovWeight {
  double j_k = 0.0;
  double v = 0.0;
};

// Centralized-scheme weight: driven by the global virtual queues and the
// pair's own backlog-plus-arrival.
double weight_rsu(const VirtualQueuePair& vq_global, double q_k,
                  double lambda_k, double w, double t_c);

// Distributed-scheme weight: local virtual queues plus an always-on linear
// term; the cubic block only engages while (q_k + lambda_k) sits inside the
// support of the fitted max-queue distribution (no fit yet counts as inside).
double weight_evt(const VirtualQueuePair& vq_local, double q_k,
                  double lambda_k, const std::optional<GevParams>& gev,
                  double w, double t_c);

// Maximize j_k * sum_n log2(1 + p_n h_n / noise_plus_i) - v * sum_n p_n
// subject to sum_n p_n <= budget, p_n >= 0.  Bisection on the budget
// multiplier followed by an exact active-set solve.
PowerDecision waterfill(double j_k, double v, std::span<const double> gains,
                        double noise_plus_i, double budget);

}  // namespace v2x
