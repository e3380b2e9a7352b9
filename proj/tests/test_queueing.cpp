#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "v2x/queueing.hpp"

using namespace v2x;

TEST_CASE("risk_to_thresholds") {
  SUBCASE("reference point") {
    CHECK_EQ(risk_to_thresholds(1e-5, 370e3, 225e3),
             doctest::Approx(2.9e10).epsilon(1e-12));
  }
  SUBCASE("doubling delta halves the budget") {
    const double b1 = risk_to_thresholds(2e-4, 300e3, 225e3);
    const double b2 = risk_to_thresholds(4e-4, 300e3, 225e3);
    CHECK_EQ(b1, doctest::Approx(2.0 * b2).epsilon(1e-12));
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(risk_to_thresholds(1e-5, 225e3, 225e3),
                    std::invalid_argument);
    CHECK_THROWS_AS(risk_to_thresholds(1e-5, 200e3, 225e3),
                    std::invalid_argument);
    CHECK_THROWS_AS(risk_to_thresholds(0.0, 370e3, 225e3),
                    std::invalid_argument);
    CHECK_THROWS_AS(risk_to_thresholds(-1.0, 370e3, 225e3),
                    std::invalid_argument);
  }
}

TEST_CASE("sample_arrivals") {
  ArrivalConfig cfg;
  cfg.lambda_avg_bps = 0.5e6;
  const double t_c = 3e-3;  // mean 1500 bits per slot
  SUBCASE("sample mean and variance match the Poisson law") {
    std::mt19937_64 rng(11);
    const int n = 1000000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = sample_arrivals(rng, cfg, t_c);
      sum += a;
      sum_sq += a * a;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK_EQ(mean, doctest::Approx(1500.0).epsilon(0.01));
    CHECK_EQ(var, doctest::Approx(1500.0).epsilon(0.03));
  }
  SUBCASE("draws are whole bit counts") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 200; ++i) {
      const double a = sample_arrivals(rng, cfg, t_c);
      CHECK_GE(a, 0.0);
      CHECK_EQ(a, std::floor(a));
    }
  }
  SUBCASE("zero rate gives zero bits") {
    std::mt19937_64 rng(13);
    ArrivalConfig none;
    none.lambda_avg_bps = 0.0;
    for (int i = 0; i < 10; ++i) CHECK_EQ(sample_arrivals(rng, none, t_c), 0.0);
  }
  SUBCASE("negative rate rejected") {
    std::mt19937_64 rng(14);
    ArrivalConfig bad;
    bad.lambda_avg_bps = -1.0;
    CHECK_THROWS_AS(sample_arrivals(rng, bad, t_c), std::invalid_argument);
  }
}

TEST_CASE("update_queue") {
  const double t_c = 3e-3;
  SUBCASE("Lindley step") {
    // serve 700 bits out of 1000 + 500
    CHECK_EQ(update_queue(1000.0, 500.0, 700.0 / t_c, t_c),
             doctest::Approx(800.0).epsilon(1e-12));
  }
  SUBCASE("floor at zero") {
    CHECK_EQ(update_queue(100.0, 0.0, 1e9, t_c), 0.0);
  }
  SUBCASE("idle fixed point") {
    CHECK_EQ(update_queue(0.0, 0.0, 0.0, t_c), 0.0);
    CHECK_EQ(update_queue(0.0, 0.0, 1e6, t_c), 0.0);
  }
  SUBCASE("no service accumulates arrivals") {
    double q = 0.0;
    for (int i = 0; i < 5; ++i) q = update_queue(q, 300.0, 0.0, t_c);
    CHECK_EQ(q, doctest::Approx(1500.0).epsilon(1e-12));
  }
  SUBCASE("drains to empty under surplus service") {
    double q = 1e6;
    int steps = 0;
    while (q > 0.0 && steps < 1000) {
      q = update_queue(q, 0.0, 1500.0 / t_c, t_c);
      ++steps;
    }
    CHECK_EQ(q, 0.0);
    CHECK_EQ(steps, 667);  // ceil(1e6 / 1500)
  }
  SUBCASE("stays nonnegative under a random walk") {
    std::mt19937_64 rng(15);
    ArrivalConfig cfg;
    double q = 0.0;
    for (int i = 0; i < 5000; ++i) {
      const double arr = sample_arrivals(rng, cfg, t_c);
      const double rate = (rng() % 2 == 0) ? 0.0 : 1.2e6;
      q = update_queue(q, arr, rate, t_c);
      CHECK_GE(q, 0.0);
    }
  }
}

TEST_CASE("update_virtual_global") {
  QueueThresholds th;  // 225e3 bits, 2.9e10 bits^2
  SUBCASE("exactly at the mean threshold leaves q_m at zero") {
    VirtualQueuePair vq;
    update_virtual_global(vq, 225e3, th);
    CHECK_EQ(vq.q_m, 0.0);
  }
  SUBCASE("excess over the mean threshold accumulates") {
    VirtualQueuePair vq;
    vq.q_m = 5.0;
    update_virtual_global(vq, 225e3 + 3.0, th);
    CHECK_EQ(vq.q_m, doctest::Approx(8.0).epsilon(1e-12));
  }
  SUBCASE("m at sqrt(b_th) leaves q_b at zero") {
    VirtualQueuePair vq;
    update_virtual_global(vq, std::sqrt(2.9e10), th);
    CHECK_EQ(vq.q_b, doctest::Approx(0.0));
    CHECK_EQ(vq.q_m, 0.0);  // sqrt(2.9e10) = 170294 < 225e3
  }
  SUBCASE("second-moment excess uses m^2") {
    VirtualQueuePair vq;
    vq.q_b = 1e9;
    const double m = 2e5;
    update_virtual_global(vq, m, th);
    CHECK_EQ(vq.q_b, doctest::Approx(1e9 + m * m - 2.9e10 < 0.0
                                         ? 0.0
                                         : 1e9 + m * m - 2.9e10)
                         .epsilon(1e-12));
  }
  SUBCASE("deficit clamps at zero, not negative") {
    VirtualQueuePair vq;
    vq.q_m = 10.0;
    vq.q_b = 10.0;
    update_virtual_global(vq, 0.0, th);
    CHECK_EQ(vq.q_m, 0.0);
    CHECK_EQ(vq.q_b, 0.0);
  }
}

TEST_CASE("update_virtual_local") {
  QueueThresholds th;
  th.m_th = 100.0;
  th.b_th = 1e4;
  SUBCASE("sample outside fitted support is masked out") {
    VirtualQueuePair vq;
    vq.q_m = 7.0;
    vq.q_b = 11.0;
    GevParams gev{10.0, 2.0, 0.5};  // support starts at 10 - 2/0.5 = 6
    update_virtual_local(vq, 4.0, gev, th);
    CHECK_EQ(vq.q_m, 7.0);
    CHECK_EQ(vq.q_b, 11.0);
  }
  SUBCASE("Gumbel fit never masks") {
    VirtualQueuePair vq;
    vq.q_m = 7.0;
    GevParams gev{10.0, 2.0, 0.0};
    update_virtual_local(vq, 150.0, gev, th);
    CHECK_EQ(vq.q_m, doctest::Approx(57.0).epsilon(1e-12));
  }
  SUBCASE("q at the location parameter is inside for either tail sign") {
    for (double xi : {-0.7, 0.7}) {
      VirtualQueuePair vq;
      GevParams gev{130.0, 2.0, xi};
      update_virtual_local(vq, 130.0, gev, th);
      CHECK_EQ(vq.q_m, doctest::Approx(30.0).epsilon(1e-12));
      CHECK_EQ(vq.q_b, doctest::Approx(130.0 * 130.0 - 1e4).epsilon(1e-12));
    }
  }
  SUBCASE("missing estimate counts as inside") {
    VirtualQueuePair vq;
    update_virtual_local(vq, 150.0, std::nullopt, th);
    CHECK_EQ(vq.q_m, doctest::Approx(50.0).epsilon(1e-12));
    CHECK_EQ(vq.q_b, doctest::Approx(150.0 * 150.0 - 1e4).epsilon(1e-12));
  }
  SUBCASE("clamped at zero like the global recursion") {
    VirtualQueuePair vq;
    update_virtual_local(vq, 0.0, std::nullopt, th);
    CHECK_EQ(vq.q_m, 0.0);
    CHECK_EQ(vq.q_b, 0.0);
  }
}

TEST_CASE("network_max") {
  CHECK_EQ(network_max({3.0, 7.0, 2.0}), 7.0);
  CHECK_EQ(network_max({4.0, 4.0}), 4.0);
  CHECK_EQ(network_max({5.0}), 5.0);
  CHECK_THROWS_AS(network_max({}), std::invalid_argument);
}
