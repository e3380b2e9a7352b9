#pragma once

#include <random>
#include <utility>
#include <vector>

namespace v2x {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct MobilityConfig {
  double area_side_m = 250.0;
  double lane_spacing_m = 50.0;
  double speed_kmh = 60.0;
  double pair_distance_m = 15.0;
  int k_pairs = 80;
};

// Square grid of lanes, identical coordinates on both axes, toroidal wrap at
// the boundary. Lane 0 and lane area_side coincide on the torus.
struct RoadNetwork {
  double area_side = 250.0;
  double lane_spacing = 50.0;
  std::vector<double> lane_coords;

  static RoadNetwork make(double area_side, double lane_spacing);

  double wrap(double c) const;                     // into [0, area_side)
  double axis_delta(double a, double b) const;     // minimum-image |a-b|
  double distance(const Vec2& a, const Vec2& b) const;
};

enum class Heading { PlusX, MinusX, PlusY, MinusY };

Vec2 heading_unit(Heading h);

struct VehiclePair {
  int id = 0;
  Vec2 tx_pos;
  Vec2 rx_pos;  // trails the transmitter by pair_distance along the heading
  Heading heading = Heading::PlusX;
  double speed_mps = 0.0;
  double pair_distance = 0.0;
};

std::pair<RoadNetwork, std::vector<VehiclePair>> init_topology(
    const MobilityConfig& config, std::mt19937_64& rng);

// Advances every pair by speed*dt along its heading; at lane intersections the
// pair turns uniformly among {straight, left, right}, the receiver swinging
// rigidly onto the new lane. Positions wrap toroidally.
void step_positions(std::vector<VehiclePair>& pairs, const RoadNetwork& network,
                    double dt_s, std::mt19937_64& rng);

// Midpoint of the pair, computed along the heading so that wrap-straddling
// pairs resolve to the on-segment point (equals (tx+rx)/2 when no wrap).
Vec2 pair_midpoint(const VehiclePair& pair, const RoadNetwork& network);

}  // namespace v2x
