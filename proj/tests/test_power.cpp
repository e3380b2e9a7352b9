#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "v2x/power.hpp"

using namespace v2x;

namespace {
constexpr double kW = 180e3;
constexpr double kTc = 3e-3;  // w * t_c = 540
}  // namespace

TEST_CASE("weight_rsu") {
  SUBCASE("all-zero state gives zero weight") {
    CHECK_EQ(weight_rsu(VirtualQueuePair{}, 0.0, 0.0, kW, kTc), 0.0);
  }
  SUBCASE("mean virtual queue enters linearly") {
    VirtualQueuePair vq;
    vq.q_m = 1.0;
    CHECK_EQ(weight_rsu(vq, 0.0, 0.0, kW, kTc),
             doctest::Approx(540.0).epsilon(1e-12));
  }
  SUBCASE("backlog-plus-arrival drives the affine and cubic terms") {
    // qa = 10: 540 * (10 + 2*1000) = 1085400
    CHECK_EQ(weight_rsu(VirtualQueuePair{}, 4.0, 6.0, kW, kTc),
             doctest::Approx(1085400.0).epsilon(1e-12));
  }
  SUBCASE("matches the reference formula on random state") {
    std::mt19937_64 rng(51);
    auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int i = 0; i < 200; ++i) {
      VirtualQueuePair vq;
      vq.q_m = 1e6 * u01();
      vq.q_b = 1e12 * u01();
      const double q = 1e5 * u01(), lam = 3e3 * u01();
      CHECK_EQ(weight_rsu(vq, q, lam, kW, kTc),
               doctest::Approx(oracle::weight_rsu_ref(vq.q_m, vq.q_b, q, lam,
                                                      kW, kTc))
                   .epsilon(1e-12));
    }
  }
  SUBCASE("negative inputs rejected") {
    VirtualQueuePair vq;
    CHECK_THROWS_AS(weight_rsu(vq, -1.0, 0.0, kW, kTc), std::invalid_argument);
    CHECK_THROWS_AS(weight_rsu(vq, 0.0, -1.0, kW, kTc), std::invalid_argument);
    vq.q_m = -1.0;
    CHECK_THROWS_AS(weight_rsu(vq, 0.0, 0.0, kW, kTc), std::invalid_argument);
  }
}

TEST_CASE("weight_evt") {
  SUBCASE("outside the fitted support only the linear term survives") {
    VirtualQueuePair vq;
    vq.q_m = 100.0;
    vq.q_b = 100.0;
    const GevParams gev{10.0, 2.0, 0.5};  // support [6, inf)
    CHECK_EQ(weight_evt(vq, 1.0, 3.0, gev, kW, kTc),
             doctest::Approx(540.0 * 4.0).epsilon(1e-12));
    const GevParams upper{10.0, 2.0, -0.5};  // support (-inf, 14]
    CHECK_EQ(weight_evt(vq, 15.0, 5.0, upper, kW, kTc),
             doctest::Approx(540.0 * 20.0).epsilon(1e-12));
  }
  SUBCASE("a Gumbel fit never masks the cubic block") {
    VirtualQueuePair vq;
    const GevParams gev{1e6, 2.0, 0.0};
    const double got = weight_evt(vq, 4.0, 6.0, gev, kW, kTc);
    CHECK_EQ(got, doctest::Approx(540.0 * (10.0 + 10.0 + 2.0 * 1000.0))
                      .epsilon(1e-12));
  }
  SUBCASE("no fit yet counts as inside") {
    VirtualQueuePair vq;
    vq.q_m = 2.0;
    const double got = weight_evt(vq, 4.0, 6.0, std::nullopt, kW, kTc);
    CHECK_EQ(got, doctest::Approx(540.0 * (10.0 + 2.0 + 10.0 + 2000.0))
                      .epsilon(1e-12));
  }
  SUBCASE("all-zero state gives zero weight") {
    CHECK_EQ(weight_evt(VirtualQueuePair{}, 0.0, 0.0, std::nullopt, kW, kTc),
             0.0);
  }
  SUBCASE("matches the reference formula on random state") {
    std::mt19937_64 rng(53);
    auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int i = 0; i < 200; ++i) {
      VirtualQueuePair vq;
      vq.q_m = 1e6 * u01();
      vq.q_b = 1e12 * u01();
      const double q = 2e4 * u01(), lam = 3e3 * u01();
      std::optional<GevParams> gev;
      bool inside = true;
      if (rng() % 2 == 0) {
        gev = GevParams{2e4 * u01(), 1.0 + 5e3 * u01(), -0.8 + 1.6 * u01()};
        const double qa = q + lam;
        inside = std::fabs(gev->xi) < 1e-6 ||
                 1.0 + gev->xi * (qa - gev->mu) / gev->sigma >= 0.0;
      }
      CHECK_EQ(weight_evt(vq, q, lam, gev, kW, kTc),
               doctest::Approx(oracle::weight_evt_ref(vq.q_m, vq.q_b, q, lam,
                                                      inside, kW, kTc))
                   .epsilon(1e-12));
    }
  }
  SUBCASE("negative inputs rejected") {
    CHECK_THROWS_AS(weight_evt(VirtualQueuePair{}, -1.0, 0.0, std::nullopt, kW, kTc),
                    std::invalid_argument);
  }
}

TEST_CASE("waterfill closed-form cases") {
  SUBCASE("single RB interior optimum") {
    // j = ln2 makes the optimality condition 1/(p + ni/h) = v
    const std::vector<double> h{1.0};
    const PowerDecision dec =
        waterfill(std::log(2.0), 1.0, h, 0.5, 10.0);
    REQUIRE_EQ(dec.p.size(), 1);
    CHECK_EQ(dec.p[0], doctest::Approx(0.5).epsilon(1e-9));
    CHECK_EQ(dec.eta, doctest::Approx(0.0));
    CHECK_EQ(dec.objective,
             doctest::Approx(std::log(2.0) - 0.5).epsilon(1e-9));
  }
  SUBCASE("zero weight spends nothing") {
    const std::vector<double> h{1.0, 2.0};
    const PowerDecision dec = waterfill(0.0, 1.0, h, 0.5, 1.0);
    CHECK_EQ(dec.total(), 0.0);
    CHECK_EQ(dec.objective, 0.0);
    CHECK_EQ(dec.eta, 0.0);
  }
  SUBCASE("free rate splits a binding budget across equal gains") {
    const std::vector<double> h{2.0, 2.0};
    const PowerDecision dec = waterfill(3.0, 0.0, h, 0.7, 0.01);
    REQUIRE_EQ(dec.p.size(), 2);
    CHECK_EQ(dec.p[0], doctest::Approx(0.005).epsilon(1e-9));
    CHECK_EQ(dec.p[1], doctest::Approx(0.005).epsilon(1e-9));
    CHECK_EQ(dec.total(), doctest::Approx(0.01).epsilon(1e-9));
    CHECK_GT(dec.eta, 0.0);
  }
  SUBCASE("empty and dead channels") {
    const PowerDecision none = waterfill(1.0, 1.0, {}, 0.5, 1.0);
    CHECK(none.p.empty());
    CHECK_EQ(none.objective, 0.0);
    const std::vector<double> dead{0.0, 0.0, 0.0};
    const PowerDecision dec = waterfill(1.0, 1.0, dead, 0.5, 1.0);
    CHECK_EQ(dec.total(), 0.0);
  }
  SUBCASE("a weak RB below the activation threshold stays off") {
    const std::vector<double> h{1.0, 0.01};
    const PowerDecision dec = waterfill(1.0, 0.2, h, 1.0, 10.0);
    const double level = 1.0 / (0.2 * std::log(2.0));
    CHECK_EQ(dec.p[0], doctest::Approx(level - 1.0).epsilon(1e-9));
    CHECK_EQ(dec.p[1], 0.0);
    CHECK_EQ(dec.eta, doctest::Approx(0.0));
  }
  SUBCASE("input validation") {
    const std::vector<double> h{1.0};
    CHECK_THROWS_AS(waterfill(-1.0, 1.0, h, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(waterfill(1.0, -1.0, h, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(waterfill(1.0, 1.0, h, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(waterfill(1.0, 1.0, h, 0.5, 0.0), std::invalid_argument);
    const std::vector<double> bad{1.0, -0.5};
    CHECK_THROWS_AS(waterfill(1.0, 1.0, bad, 0.5, 1.0), std::invalid_argument);
  }
}

TEST_CASE("waterfill monotonicity and feasibility") {
  const std::vector<double> h{1.0, 0.3, 2.5};
  const double ni = 0.2, budget = 0.5;
  SUBCASE("total power nondecreasing in the weight") {
    double prev = -1.0;
    for (double j : {0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0}) {
      const PowerDecision dec = waterfill(j, 2.0, h, ni, budget);
      CHECK_GE(dec.total(), prev - 1e-12);
      CHECK_LE(dec.total(), budget + 1e-12);
      prev = dec.total();
    }
  }
  SUBCASE("total power nonincreasing in the power price") {
    double prev = 2.0 * budget;
    for (double v : {0.0, 0.1, 0.5, 2.0, 10.0, 100.0}) {
      const PowerDecision dec = waterfill(1.0, v, h, ni, budget);
      CHECK_LE(dec.total(), prev + 1e-12);
      for (double p : dec.p) CHECK_GE(p, 0.0);
      prev = dec.total();
    }
  }
}

TEST_CASE("waterfill against the grid and gradient oracles") {
  std::mt19937_64 rng(57);
  SUBCASE("beats every grid allocation") {
    for (int i = 0; i < 30; ++i) {
      const oracle::WfInstance in = oracle::wf_random_instance(rng, i % 3 == 0);
      const PowerDecision dec =
          waterfill(in.j, in.v, in.h, in.noise_plus_i, in.budget);
      const double grid = oracle::wf_grid_best(in, 1e-4);
      CHECK_GE(dec.objective, grid - 1e-6 * std::max(1.0, std::fabs(grid)));
      CHECK_EQ(dec.objective,
               doctest::Approx(oracle::wf_objective(in, dec.p)).epsilon(1e-9));
      CHECK_LE(dec.total(), in.budget * (1.0 + 1e-12));
    }
  }
  SUBCASE("agrees with projected gradient ascent") {
    for (int i = 0; i < 10; ++i) {
      const oracle::WfInstance in = oracle::wf_random_instance(rng, i % 2 == 0);
      const PowerDecision dec =
          waterfill(in.j, in.v, in.h, in.noise_plus_i, in.budget);
      const double pg = oracle::wf_pg_best(in, 20000);
      CHECK_GE(dec.objective, pg - 1e-6 * std::max(1.0, std::fabs(pg)));
    }
  }
  SUBCASE("KKT residuals") {
    for (int i = 0; i < 100; ++i) {
      const oracle::WfInstance in = oracle::wf_random_instance(rng, i % 4 == 0);
      const PowerDecision dec =
          waterfill(in.j, in.v, in.h, in.noise_plus_i, in.budget);
      if (dec.total() == 0.0 && dec.eta == 0.0) continue;  // inactive solution
      CHECK_LE(oracle::wf_kkt_residual(in, dec.p, dec.eta), 1e-8);
    }
  }
}
