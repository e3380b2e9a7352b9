#include "v2x/mobility.hpp"

#include <cmath>
#include <stdexcept>

#include "v2x/mathx.hpp"

namespace v2x {

RoadNetwork RoadNetwork::make(double area_side, double lane_spacing) {
  if (area_side <= 0.0) throw std::invalid_argument("area_side must be > 0");
  if (lane_spacing <= 0.0) throw std::invalid_argument("lane_spacing must be > 0");
  if (lane_spacing > area_side) {
    throw std::invalid_argument("lane_spacing must not exceed area_side");
  }
  RoadNetwork net;
  net.area_side = area_side;
  net.lane_spacing = lane_spacing;
  const int per_axis = static_cast<int>(std::floor(area_side / lane_spacing)) + 1;
  net.lane_coords.reserve(per_axis);
  for (int i = 0; i < per_axis; ++i) net.lane_coords.push_back(i * lane_spacing);
  return net;
}

double RoadNetwork::wrap(double c) const {
  double r = std::fmod(c, area_side);
  if (r < 0.0) r += area_side;
  return r;
}

double RoadNetwork::axis_delta(double a, double b) const {
  double d = std::fabs(wrap(a) - wrap(b));
  return std::min(d, area_side - d);
}

double RoadNetwork::distance(const Vec2& a, const Vec2& b) const {
  const double dx = axis_delta(a.x, b.x);
  const double dy = axis_delta(a.y, b.y);
  return std::hypot(dx, dy);
}

Vec2 heading_unit(Heading h) {
  switch (h) {
    case Heading::PlusX: return {1.0, 0.0};
    case Heading::MinusX: return {-1.0, 0.0};
    case Heading::PlusY: return {0.0, 1.0};
    case Heading::MinusY: return {0.0, -1.0};
  }
  return {1.0, 0.0};
}

namespace {

void place_rx(VehiclePair& p, const RoadNetwork& net) {
  const Vec2 u = heading_unit(p.heading);
  p.rx_pos.x = net.wrap(p.tx_pos.x - p.pair_distance * u.x);
  p.rx_pos.y = net.wrap(p.tx_pos.y - p.pair_distance * u.y);
}

// Heading after a turn choice: 0 straight, 1 left, 2 right.
Heading turned(Heading h, int choice) {
  if (choice == 0) return h;
  const bool left = (choice == 1);
  switch (h) {
    case Heading::PlusX: return left ? Heading::PlusY : Heading::MinusY;
    case Heading::MinusX: return left ? Heading::MinusY : Heading::PlusY;
    case Heading::PlusY: return left ? Heading::MinusX : Heading::PlusX;
    case Heading::MinusY: return left ? Heading::PlusX : Heading::MinusX;
  }
  return h;
}

void advance(VehiclePair& p, const RoadNetwork& net, double d) {
  const Vec2 u = heading_unit(p.heading);
  p.tx_pos.x = net.wrap(p.tx_pos.x + d * u.x);
  p.tx_pos.y = net.wrap(p.tx_pos.y + d * u.y);
  place_rx(p, net);
}

// Distance, in travel direction dir (+1/-1), from coordinate `along` to the
// nearest perpendicular lane. A lane we are already standing on counts as a
// full loop away (the turn decision at it has already been made).
double dist_to_next_crossing(const RoadNetwork& net, double along, double dir) {
  double best = net.area_side;
  for (double c : net.lane_coords) {
    double d = dir > 0.0 ? net.wrap(c - along) : net.wrap(along - c);
    if (d < 1e-9) d = net.area_side;
    best = std::min(best, d);
  }
  return best;
}

}  // namespace

std::pair<RoadNetwork, std::vector<VehiclePair>> init_topology(
    const MobilityConfig& config, std::mt19937_64& rng) {
  if (config.k_pairs < 1) throw std::invalid_argument("k_pairs must be >= 1");
  if (config.pair_distance_m <= 0.0) {
    throw std::invalid_argument("pair_distance_m must be > 0");
  }
  if (config.pair_distance_m >= config.area_side_m) {
    throw std::invalid_argument("pair_distance_m must be < area_side_m");
  }
  if (config.speed_kmh <= 0.0) throw std::invalid_argument("speed_kmh must be > 0");
  RoadNetwork net = RoadNetwork::make(config.area_side_m, config.lane_spacing_m);

  std::vector<VehiclePair> pairs;
  pairs.reserve(config.k_pairs);
  const double speed_mps = config.speed_kmh / 3.6;
  for (int k = 0; k < config.k_pairs; ++k) {
    VehiclePair p;
    p.id = k;
    p.speed_mps = speed_mps;
    p.pair_distance = config.pair_distance_m;
    const bool horizontal = rng_below(rng, 2) == 0;
    const double lane =
        net.lane_coords[rng_below(rng, net.lane_coords.size())];
    const double along = rng_u01(rng) * net.area_side;
    const bool forward = rng_below(rng, 2) == 0;
    if (horizontal) {
      p.heading = forward ? Heading::PlusX : Heading::MinusX;
      p.tx_pos = {net.wrap(along), lane};
    } else {
      p.heading = forward ? Heading::PlusY : Heading::MinusY;
      p.tx_pos = {lane, net.wrap(along)};
    }
    place_rx(p, net);
    pairs.push_back(p);
  }
  return {std::move(net), std::move(pairs)};
}

void step_positions(std::vector<VehiclePair>& pairs, const RoadNetwork& network,
                    double dt_s, std::mt19937_64& rng) {
  if (dt_s < 0.0) throw std::invalid_argument("dt_s must be >= 0");
  for (VehiclePair& p : pairs) {
    double remaining = p.speed_mps * dt_s;
    // Guard against infinite looping on degenerate spacing.
    int hops = 0;
    while (remaining > 1e-12 && hops < 64) {
      const Vec2 u = heading_unit(p.heading);
      const double along =
          (u.x != 0.0) ? network.wrap(p.tx_pos.x) : network.wrap(p.tx_pos.y);
      const double dir = (u.x != 0.0) ? u.x : u.y;
      const double to_next = dist_to_next_crossing(network, along, dir);
      if (remaining + 1e-9 < to_next) {
        advance(p, network, remaining);
        remaining = 0.0;
      } else {
        advance(p, network, to_next);
        remaining -= to_next;
        p.heading = turned(p.heading, static_cast<int>(rng_below(rng, 3)));
        place_rx(p, network);
        ++hops;
      }
    }
  }
}

Vec2 pair_midpoint(const VehiclePair& pair, const RoadNetwork& network) {
  const Vec2 u = heading_unit(pair.heading);
  return {network.wrap(pair.tx_pos.x - 0.5 * pair.pair_distance * u.x),
          network.wrap(pair.tx_pos.y - 0.5 * pair.pair_distance * u.y)};
}

}  // namespace v2x
