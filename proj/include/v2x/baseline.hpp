#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "v2x/queueing.hpp"

namespace v2x {

// Constant-service-rate reference model: tail exponent theta of the
// stationary queue, busy probability, and the service rate itself.
struct BaselineModel {
  double r_c_bps = 0.0;
  double theta = 0.0;   // 1/bits
  double p_busy = 0.0;  // Pr(Q > 0)
};

struct BaselineMaxStats {
  double mean = 0.0;
  double var = 0.0;
  bool mean_clamped = false;  // K * p_busy <= 1 pushed the log negative
};

// Min-power allocation hitting a target rate over parallel channels,
// capped at the power budget.
struct InversionResult {
  std::vector<double> p;
  double rate_bps = 0.0;
  bool capped = false;
};

// Per-bit Poisson arrivals: beta(theta) = lambda * (e^theta - 1) / theta.
double effective_bandwidth(double theta, double lambda_avg_bps);

// Inverse of the effective bandwidth, by bisection.
double solve_theta(double r_c_bps, double lambda_avg_bps);

BaselineModel make_baseline(double r_c_bps, double lambda_avg_bps,
                            std::optional<double> p_busy_override = {});

// Pr(Q > q) ~ p_busy * exp(-theta q).
double baseline_ccdf(double q_bits, const BaselineModel& model);

// Gumbel approximation of max over k_pairs iid queues:
// mean ~ [ln(K p_busy) + gamma] / theta, var ~ pi^2 / (6 theta^2).
BaselineMaxStats baseline_max_stats(int k_pairs, const BaselineModel& model);

// Water-level allocation reaching r_target_bps at minimum total power,
// spending at most `budget` watts.
InversionResult invert_rate(double r_target_bps, std::span<const double> gains,
                            double noise_plus_i, double bandwidth_w,
                            double budget);

// Empirical max-queue statistics of k iid constant-rate queues (service
// exactly t_c * r_c bits per slot).  Warmup slots are discarded.
struct ConstantRateRun {
  double mean_m = 0.0;
  double var_m = 0.0;
  double busy_fraction = 0.0;  // per-queue-slot fraction with Q > 0
};

ConstantRateRun simulate_constant_rate_queues(int k, std::int64_t slots,
                                              std::int64_t warmup, double r_c_bps,
                                              const ArrivalConfig& cfg,
                                              double t_c_s, std::uint64_t seed);

// Same statistic from the continuous-drain workload: bits arrive one at a
// time as a Poisson process and drain at r_c between arrivals, with the
// workload sampled at slot boundaries.  At moderate utilization the slotted
// recursion above never leaves zero (a slot's Poisson batch is far below
// t_c * r_c on the 1/theta scale), so this is the variant to compare against
// the stationary-tail formulas.
ConstantRateRun simulate_constant_rate_workload(int k, std::int64_t slots,
                                                std::int64_t warmup,
                                                double r_c_bps,
                                                double lambda_avg_bps,
                                                double t_c_s,
                                                std::uint64_t seed);

}  // namespace v2x
