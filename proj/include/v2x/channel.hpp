#pragma once

#include <random>
#include <span>
#include <vector>

#include "v2x/mobility.hpp"

namespace v2x {

struct PathLossParams {
  double l0 = 1.4125375446227544e-07;        // 10^(-68.5/10)
  double l0_prime = 3.5481338923357532e-06;  // 10^(-54.5/10)
  double alpha = 1.61;
  double delta_m = 15.0;
  double min_distance_m = 1.0;  // same-lane distances clamped below this

  void validate() const;  // positivity and l0_prime < l0*(delta/2)^alpha
};

// Per-slot channel snapshot: h[k'][k][n] is the gain from transmitter k' to
// receiver k on RB n (path loss times unit-mean exponential fading).
struct LinkState {
  int k = 0;
  int n_rb = 0;
  std::vector<double> gains;
  double noise_floor_w = 0.0;     // N0*W
  double interference_w = 0.0;    // constant interference floor

  double at(int tx, int rx, int rb) const {
    return gains[(static_cast<std::size_t>(tx) * k + rx) * n_rb + rb];
  }
  double& at(int tx, int rx, int rb) {
    return gains[(static_cast<std::size_t>(tx) * k + rx) * n_rb + rb];
  }
};

struct RateParams {
  double bandwidth_w = 180e3;
  double blocklength_l = 540.0;
  double error_prob_eps = 0.5;

  void validate() const;
};

// Geometry-classed path loss between two on-lane points: same lane, bent
// (near-intersection) perpendicular, far perpendicular, or blocked parallel.
double path_loss(const Vec2& tx, const Vec2& rx, const RoadNetwork& network,
                 const PathLossParams& params);

LinkState sample_link_gains(const std::vector<VehiclePair>& pairs,
                            const RoadNetwork& network,
                            const PathLossParams& params, int n_rb,
                            double noise_floor_w, double interference_w,
                            std::mt19937_64& rng);

// Own-link gains only (k x n_rb, row-major): the constant-interference rate
// model never reads cross gains, so the slot loop skips sampling them.  Draw
// order is pair-major then RB, one unit-mean exponential each.
std::vector<double> sample_own_gains(const std::vector<VehiclePair>& pairs,
                                     const RoadNetwork& network,
                                     const PathLossParams& params, int n_rb,
                                     std::mt19937_64& rng);

// Sum-rate over RBs with the constant-interference approximation, bits/s.
double shannon_rate(std::span<const double> powers_w,
                    std::span<const double> gains, double noise_floor_w,
                    double interference_w, double bandwidth_w);

// Exact-SINR variant: per-RB aggregate interference instead of the constant.
double shannon_rate_sinr(std::span<const double> powers_w,
                         std::span<const double> gains,
                         std::span<const double> interference_w,
                         double noise_floor_w, double bandwidth_w);

// Normal-approximation rate at blocklength l and error probability eps,
// bits/s/Hz, clamped below at zero. eps = 0.5 gives log2(1+gamma) exactly.
double finite_blocklength_rate(double gamma, double l, double eps);

}  // namespace v2x
