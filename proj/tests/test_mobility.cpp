#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "v2x/mobility.hpp"

using namespace v2x;

namespace {

bool on_lane(const RoadNetwork& net, const Vec2& pos, double tol = 1e-9) {
  for (double c : net.lane_coords) {
    if (net.axis_delta(pos.x, c) < tol || net.axis_delta(pos.y, c) < tol) {
      return true;
    }
  }
  return false;
}

VehiclePair make_pair_at(const RoadNetwork& net, Vec2 tx, Heading h,
                         double pair_distance, double speed_mps = 60.0 / 3.6) {
  VehiclePair p;
  p.id = 0;
  p.tx_pos = tx;
  p.heading = h;
  p.speed_mps = speed_mps;
  p.pair_distance = pair_distance;
  const Vec2 u = heading_unit(h);
  p.rx_pos = {net.wrap(tx.x - pair_distance * u.x),
              net.wrap(tx.y - pair_distance * u.y)};
  return p;
}

}  // namespace

TEST_CASE("road network lanes and torus metric") {
  const RoadNetwork net = RoadNetwork::make(250.0, 50.0);
  CHECK_EQ(net.lane_coords.size(), 6);  // 0, 50, ..., 250 (250 wraps onto 0)
  CHECK_EQ(net.lane_coords.front(), 0.0);
  CHECK_EQ(net.wrap(250.0), 0.0);
  CHECK_EQ(net.wrap(-10.0), doctest::Approx(240.0));
  CHECK_EQ(net.axis_delta(5.0, 245.0), doctest::Approx(10.0));  // wraps around
  CHECK_EQ(net.distance({0.0, 0.0}, {15.0, 0.0}), doctest::Approx(15.0));
  CHECK_EQ(net.distance({245.0, 0.0}, {5.0, 0.0}), doctest::Approx(10.0));
  CHECK_THROWS_AS(RoadNetwork::make(250.0, 300.0), std::invalid_argument);
  CHECK_THROWS_AS(RoadNetwork::make(0.0, 50.0), std::invalid_argument);
}

TEST_CASE("init_topology places pairs on lanes 15 m apart") {
  MobilityConfig mc;
  mc.k_pairs = 1;
  std::mt19937_64 rng(7);
  auto [net, pairs] = init_topology(mc, rng);
  REQUIRE_EQ(pairs.size(), 1);
  const VehiclePair& p = pairs[0];
  CHECK_EQ(net.distance(p.tx_pos, p.rx_pos), doctest::Approx(15.0).epsilon(1e-9));
  CHECK(on_lane(net, p.tx_pos));
  CHECK(on_lane(net, p.rx_pos));
  CHECK_EQ(p.speed_mps, doctest::Approx(60.0 / 3.6));
}

TEST_CASE("init_topology validation") {
  std::mt19937_64 rng(1);
  MobilityConfig mc;
  SUBCASE("k_pairs = 0") {
    mc.k_pairs = 0;
    CHECK_THROWS_AS(init_topology(mc, rng), std::invalid_argument);
  }
  SUBCASE("pair_distance <= 0") {
    mc.pair_distance_m = 0.0;
    CHECK_THROWS_AS(init_topology(mc, rng), std::invalid_argument);
  }
  SUBCASE("lane spacing exceeds area") {
    mc.lane_spacing_m = 400.0;
    CHECK_THROWS_AS(init_topology(mc, rng), std::invalid_argument);
  }
  SUBCASE("speed <= 0") {
    mc.speed_kmh = 0.0;
    CHECK_THROWS_AS(init_topology(mc, rng), std::invalid_argument);
  }
}

TEST_CASE("init_topology is deterministic for a fixed seed") {
  MobilityConfig mc;
  mc.k_pairs = 80;
  std::mt19937_64 rng_a(4), rng_b(4);
  auto [net_a, pa] = init_topology(mc, rng_a);
  auto [net_b, pb] = init_topology(mc, rng_b);
  REQUIRE_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK_EQ(pa[i].tx_pos.x, pb[i].tx_pos.x);
    CHECK_EQ(pa[i].tx_pos.y, pb[i].tx_pos.y);
    CHECK_EQ(pa[i].rx_pos.x, pb[i].rx_pos.x);
    CHECK_EQ(pa[i].rx_pos.y, pb[i].rx_pos.y);
    CHECK_EQ(static_cast<int>(pa[i].heading), static_cast<int>(pb[i].heading));
  }
}

TEST_CASE("one straight slot moves the pair exactly speed * dt") {
  const RoadNetwork net = RoadNetwork::make(250.0, 50.0);
  std::vector<VehiclePair> pairs{
      make_pair_at(net, {10.0, 50.0}, Heading::PlusX, 15.0)};
  const Vec2 before = pairs[0].tx_pos;
  std::mt19937_64 rng(3);
  step_positions(pairs, net, 3e-3, rng);
  // next crossing is 40 m away, so the hop is turn-free
  CHECK_EQ(pairs[0].tx_pos.x, doctest::Approx(10.05).epsilon(1e-12));
  CHECK_EQ(pairs[0].tx_pos.y, doctest::Approx(50.0));
  CHECK_EQ(net.distance(before, pairs[0].tx_pos),
           doctest::Approx(0.05).epsilon(1e-9));
  CHECK_EQ(net.distance(pairs[0].tx_pos, pairs[0].rx_pos),
           doctest::Approx(15.0).epsilon(1e-9));
}

TEST_CASE("dt = 0 leaves positions untouched") {
  const RoadNetwork net = RoadNetwork::make(250.0, 50.0);
  std::vector<VehiclePair> pairs{
      make_pair_at(net, {123.0, 100.0}, Heading::MinusX, 15.0)};
  const VehiclePair before = pairs[0];
  std::mt19937_64 rng(3);
  step_positions(pairs, net, 0.0, rng);
  CHECK_EQ(pairs[0].tx_pos.x, before.tx_pos.x);
  CHECK_EQ(pairs[0].tx_pos.y, before.tx_pos.y);
  CHECK_EQ(pairs[0].rx_pos.x, before.rx_pos.x);
  CHECK_EQ(pairs[0].rx_pos.y, before.rx_pos.y);
}

TEST_CASE("crossing the boundary wraps toroidally") {
  const RoadNetwork net = RoadNetwork::make(250.0, 50.0);
  std::vector<VehiclePair> pairs{
      make_pair_at(net, {248.0, 0.0}, Heading::PlusX, 15.0, 1.0)};
  std::mt19937_64 rng(11);
  step_positions(pairs, net, 4.0, rng);  // 4 m: crosses x = 250 == 0
  // whatever turn was taken at the intersection, x must have wrapped
  CHECK_LE(pairs[0].tx_pos.x, 2.0 + 1e-9);
  CHECK(on_lane(net, pairs[0].tx_pos));
  CHECK_EQ(net.distance(pairs[0].tx_pos, pairs[0].rx_pos),
           doctest::Approx(15.0).epsilon(1e-9));
}

TEST_CASE("long-run invariants: on-lane, rigid distance, bounded step") {
  MobilityConfig mc;
  mc.k_pairs = 40;
  std::mt19937_64 rng(5);
  auto [net, pairs] = init_topology(mc, rng);
  const double dt = 3e-3;
  const double step = pairs[0].speed_mps * dt;
  for (int t = 0; t < 500; ++t) {
    std::vector<Vec2> before(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) before[i] = pairs[i].tx_pos;
    step_positions(pairs, net, dt, rng);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      REQUIRE(on_lane(net, pairs[i].tx_pos));
      REQUIRE(on_lane(net, pairs[i].rx_pos));
      REQUIRE_EQ(net.distance(pairs[i].tx_pos, pairs[i].rx_pos),
                 doctest::Approx(15.0).epsilon(1e-9));
      // path length is exactly speed*dt; the euclidean displacement can only
      // shrink when the path bends at an intersection (never below 1/sqrt(2))
      const double moved = net.distance(before[i], pairs[i].tx_pos);
      REQUIRE_LE(moved, step + 1e-9);
      REQUIRE_GE(moved, step / std::sqrt(2.0) - 1e-9);
    }
  }
}

TEST_CASE("trajectories are reproducible for a fixed seed") {
  MobilityConfig mc;
  mc.k_pairs = 12;
  std::mt19937_64 rng_a(9), rng_b(9);
  auto [net_a, pa] = init_topology(mc, rng_a);
  auto [net_b, pb] = init_topology(mc, rng_b);
  for (int t = 0; t < 300; ++t) {
    step_positions(pa, net_a, 3e-3, rng_a);
    step_positions(pb, net_b, 3e-3, rng_b);
  }
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK_EQ(pa[i].tx_pos.x, pb[i].tx_pos.x);
    CHECK_EQ(pa[i].tx_pos.y, pb[i].tx_pos.y);
    CHECK_EQ(static_cast<int>(pa[i].heading), static_cast<int>(pb[i].heading));
  }
}

TEST_CASE("pair_midpoint is the arithmetic mean of tx and rx") {
  const RoadNetwork net = RoadNetwork::make(250.0, 50.0);
  SUBCASE("tx=(0,0), rx=(15,0)") {
    const VehiclePair p = make_pair_at(net, {0.0, 0.0}, Heading::MinusX, 15.0);
    CHECK_EQ(p.rx_pos.x, doctest::Approx(15.0));
    const Vec2 mid = pair_midpoint(p, net);
    CHECK_EQ(mid.x, doctest::Approx(7.5));
    CHECK_EQ(mid.y, doctest::Approx(0.0));
  }
  SUBCASE("tx=(10,20), rx=(10,5)") {
    const VehiclePair p = make_pair_at(net, {10.0, 20.0}, Heading::PlusY, 15.0);
    CHECK_EQ(p.rx_pos.y, doctest::Approx(5.0));
    const Vec2 mid = pair_midpoint(p, net);
    CHECK_EQ(mid.x, doctest::Approx(10.0));
    CHECK_EQ(mid.y, doctest::Approx(12.5));
  }
  SUBCASE("degenerate tx == rx") {
    const VehiclePair p = make_pair_at(net, {40.0, 50.0}, Heading::PlusX, 0.0);
    const Vec2 mid = pair_midpoint(p, net);
    CHECK_EQ(mid.x, doctest::Approx(40.0));
    CHECK_EQ(mid.y, doctest::Approx(50.0));
  }
  SUBCASE("midpoint respects the wrap") {
    // tx at 5, rx at 240: the segment runs through 0, midpoint at 247.5
    const VehiclePair p = make_pair_at(net, {5.0, 0.0}, Heading::PlusX, 15.0);
    CHECK_EQ(p.rx_pos.x, doctest::Approx(240.0));
    const Vec2 mid = pair_midpoint(p, net);
    CHECK_EQ(mid.x, doctest::Approx(247.5));
  }
}
