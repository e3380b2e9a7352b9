#include "v2x/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "v2x/mathx.hpp"

namespace v2x {

namespace {

constexpr double kOnLaneEps = 1e-6;

// Distance from coordinate c to the nearest lane of the grid.
double lane_offset(const RoadNetwork& net, double c) {
  double best = net.area_side;
  for (double lane : net.lane_coords) best = std::min(best, net.axis_delta(c, lane));
  return best;
}

bool on_horizontal(const RoadNetwork& net, const Vec2& p) {
  return lane_offset(net, p.y) < kOnLaneEps;
}
bool on_vertical(const RoadNetwork& net, const Vec2& p) {
  return lane_offset(net, p.x) < kOnLaneEps;
}

}  // namespace

void PathLossParams::validate() const {
  if (l0 <= 0.0) throw std::invalid_argument("pathloss l0 must be > 0");
  if (l0_prime <= 0.0) throw std::invalid_argument("pathloss l0_prime must be > 0");
  if (alpha <= 0.0) throw std::invalid_argument("pathloss alpha must be > 0");
  if (delta_m <= 0.0) throw std::invalid_argument("pathloss delta_m must be > 0");
  if (min_distance_m <= 0.0) {
    throw std::invalid_argument("pathloss min_distance_m must be > 0");
  }
  if (!(l0_prime < l0 * std::pow(delta_m / 2.0, alpha))) {
    throw std::invalid_argument(
        "pathloss consistency violated: require l0_prime < l0*(delta/2)^alpha");
  }
}

void RateParams::validate() const {
  if (bandwidth_w <= 0.0) throw std::invalid_argument("bandwidth_w must be > 0");
  if (blocklength_l < 1.0) throw std::invalid_argument("blocklength_l must be >= 1");
  if (!(error_prob_eps > 0.0) || error_prob_eps > 0.5) {
    throw std::invalid_argument("error_prob_eps must lie in (0, 0.5]");
  }
}

double path_loss(const Vec2& tx, const Vec2& rx, const RoadNetwork& network,
                 const PathLossParams& params) {
  const bool tx_h = on_horizontal(network, tx);
  const bool tx_v = on_vertical(network, tx);
  const bool rx_h = on_horizontal(network, rx);
  const bool rx_v = on_vertical(network, rx);

  // Shared lane: direct line of sight.
  if ((tx_h && rx_h && network.axis_delta(tx.y, rx.y) < kOnLaneEps) ||
      (tx_v && rx_v && network.axis_delta(tx.x, rx.x) < kOnLaneEps)) {
    const double d = std::max(network.distance(tx, rx), params.min_distance_m);
    return params.l0 * std::pow(d, -params.alpha);
  }

  // Perpendicular lanes. The crossing point is one per-axis leg away from each
  // endpoint, so the proximity test reduces to min(leg) <= delta.
  if ((tx_h && rx_v) || (tx_v && rx_h)) {
    const double dx = network.axis_delta(tx.x, rx.x);
    const double dy = network.axis_delta(tx.y, rx.y);
    const double leg_tx = tx_h ? dx : dy;  // tx's distance to the crossing
    const double leg_rx = tx_h ? dy : dx;
    if (leg_tx <= params.delta_m || leg_rx <= params.delta_m) {
      const double d = std::max(dx + dy, params.min_distance_m);
      return params.l0 * std::pow(d, -params.alpha);
    }
    return params.l0_prime * std::pow(dx * dy, -params.alpha);
  }

  // Distinct parallel lanes: buildings block the path entirely.
  return 0.0;
}

LinkState sample_link_gains(const std::vector<VehiclePair>& pairs,
                            const RoadNetwork& network,
                            const PathLossParams& params, int n_rb,
                            double noise_floor_w, double interference_w,
                            std::mt19937_64& rng) {
  const int k = static_cast<int>(pairs.size());
  LinkState ls;
  ls.k = k;
  ls.n_rb = n_rb;
  ls.noise_floor_w = noise_floor_w;
  ls.interference_w = interference_w;
  ls.gains.assign(static_cast<std::size_t>(k) * k * n_rb, 0.0);
  for (int tx = 0; tx < k; ++tx) {
    for (int rx = 0; rx < k; ++rx) {
      const double pl =
          path_loss(pairs[tx].tx_pos, pairs[rx].rx_pos, network, params);
      for (int n = 0; n < n_rb; ++n) {
        ls.at(tx, rx, n) = pl * rng_exp(rng, 1.0);
      }
    }
  }
  return ls;
}

std::vector<double> sample_own_gains(const std::vector<VehiclePair>& pairs,
                                     const RoadNetwork& network,
                                     const PathLossParams& params, int n_rb,
                                     std::mt19937_64& rng) {
  std::vector<double> gains(pairs.size() * static_cast<std::size_t>(n_rb), 0.0);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double pl =
        path_loss(pairs[k].tx_pos, pairs[k].rx_pos, network, params);
    for (int n = 0; n < n_rb; ++n) {
      gains[k * n_rb + n] = pl * rng_exp(rng, 1.0);
    }
  }
  return gains;
}

double shannon_rate(std::span<const double> powers_w,
                    std::span<const double> gains, double noise_floor_w,
                    double interference_w, double bandwidth_w) {
  const double denom = noise_floor_w + interference_w;
  double bits_per_s = 0.0;
  for (std::size_t n = 0; n < powers_w.size(); ++n) {
    bits_per_s += bandwidth_w * std::log2(1.0 + powers_w[n] * gains[n] / denom);
  }
  return bits_per_s;
}

double shannon_rate_sinr(std::span<const double> powers_w,
                         std::span<const double> gains,
                         std::span<const double> interference_w,
                         double noise_floor_w, double bandwidth_w) {
  double bits_per_s = 0.0;
  for (std::size_t n = 0; n < powers_w.size(); ++n) {
    const double denom = noise_floor_w + interference_w[n];
    bits_per_s += bandwidth_w * std::log2(1.0 + powers_w[n] * gains[n] / denom);
  }
  return bits_per_s;
}

double finite_blocklength_rate(double gamma, double l, double eps) {
  if (gamma < 0.0) throw std::domain_error("finite_blocklength_rate: gamma < 0");
  if (l < 1.0) throw std::domain_error("finite_blocklength_rate: l < 1");
  if (!(eps > 0.0) || eps > 0.5) {
    throw std::domain_error("finite_blocklength_rate: eps must lie in (0, 0.5]");
  }
  const double base = std::log2(1.0 + gamma);
  if (eps == 0.5) return base;  // inv_erfc(1) = 0: the dispersion term vanishes
  if (gamma == 0.0) return 0.0;
  const double dispersion = std::sqrt(2.0 * gamma * (gamma + 2.0)) *
                            inv_erfc(2.0 * eps) /
                            (std::sqrt(l) * (1.0 + gamma) * M_LN2);
  return std::max(0.0, base - dispersion);
}

}  // namespace v2x
