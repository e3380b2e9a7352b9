#include "v2x/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "v2x/mathx.hpp"

namespace v2x {

double effective_bandwidth(double theta, double lambda_avg_bps) {
  if (theta <= 0.0) throw std::invalid_argument("effective_bandwidth: theta <= 0");
  if (theta < 1e-8) return lambda_avg_bps * (1.0 + 0.5 * theta + theta * theta / 6.0);
  return lambda_avg_bps * std::expm1(theta) / theta;
}

double solve_theta(double r_c_bps, double lambda_avg_bps) {
  if (!(r_c_bps > lambda_avg_bps))
    throw std::domain_error("solve_theta: service rate must exceed arrival rate");
  if (lambda_avg_bps <= 0.0)
    throw std::invalid_argument("solve_theta: lambda_avg <= 0");
  double hi = 1.0;
  while (effective_bandwidth(hi, lambda_avg_bps) < r_c_bps) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 500; ++it) {
    const double mid = 0.5 * (lo + hi);
    (effective_bandwidth(mid, lambda_avg_bps) < r_c_bps ? lo : hi) = mid;
    if (hi - lo <= 1e-10 * hi) break;
  }
  return 0.5 * (lo + hi);
}

BaselineModel make_baseline(double r_c_bps, double lambda_avg_bps,
                            std::optional<double> p_busy_override) {
  BaselineModel m;
  m.r_c_bps = r_c_bps;
  m.theta = solve_theta(r_c_bps, lambda_avg_bps);
  m.p_busy = p_busy_override.value_or(lambda_avg_bps / r_c_bps);
  if (!(m.p_busy > 0.0 && m.p_busy <= 1.0))
    throw std::invalid_argument("make_baseline: p_busy outside (0, 1]");
  return m;
}

double baseline_ccdf(double q_bits, const BaselineModel& model) {
  if (q_bits < 0.0) throw std::invalid_argument("baseline_ccdf: q < 0");
  return model.p_busy * std::exp(-model.theta * q_bits);
}

BaselineMaxStats baseline_max_stats(int k_pairs, const BaselineModel& model) {
  if (k_pairs < 1) throw std::invalid_argument("baseline_max_stats: k_pairs < 1");
  BaselineMaxStats s;
  const double kp = static_cast<double>(k_pairs) * model.p_busy;
  const double raw = std::log(kp) + kEulerGamma;
  if (kp <= 1.0 && raw < 0.0) {
    s.mean = 0.0;
    s.mean_clamped = true;
  } else {
    s.mean = raw / model.theta;
  }
  const double pi = 3.14159265358979323846;
  s.var = pi * pi / (6.0 * model.theta * model.theta);
  return s;
}

InversionResult invert_rate(double r_target_bps, std::span<const double> gains,
                            double noise_plus_i, double bandwidth_w,
                            double budget) {
  if (noise_plus_i <= 0.0)
    throw std::invalid_argument("invert_rate: noise_plus_i <= 0");
  if (budget <= 0.0) throw std::invalid_argument("invert_rate: budget <= 0");
  InversionResult out;
  out.p.assign(gains.size(), 0.0);
  if (r_target_bps <= 0.0 || gains.empty()) return out;

  std::vector<double> cost;
  cost.reserve(gains.size());
  for (double h : gains)
    if (h > 0.0) cost.push_back(noise_plus_i / h);
  if (cost.empty()) {
    out.capped = true;
    return out;
  }

  // With water level nu the active-RB rate is W * sum log2(nu / c_n) and the
  // power is sum (nu - c_n); both increase in nu.
  auto rate_at = [&](double nu) {
    double r = 0.0;
    for (double c : cost)
      if (c < nu) r += std::log2(nu / c);
    return bandwidth_w * r;
  };
  auto power_at = [&](double nu) {
    double s = 0.0;
    for (double c : cost)
      if (c < nu) s += nu - c;
    return s;
  };

  const double c_min = *std::min_element(cost.begin(), cost.end());
  double hi = 2.0 * c_min;
  while (rate_at(hi) < r_target_bps && power_at(hi) < 4.0 * budget) hi *= 2.0;
  double lo = c_min;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rate_at(mid) < r_target_bps ? lo : hi) = mid;
    if (hi - lo <= 1e-13 * hi) break;
  }
  double nu = 0.5 * (lo + hi);

  if (power_at(nu) > budget) {
    out.capped = true;
    // exact active-set solve of sum(nu - c_n)+ = budget
    double blo = c_min, bhi = nu;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (blo + bhi);
      (power_at(mid) < budget ? blo : bhi) = mid;
      if (bhi - blo <= 1e-13 * bhi) break;
    }
    nu = 0.5 * (blo + bhi);
    for (std::size_t pass = 0; pass < cost.size() + 2; ++pass) {
      std::size_t m = 0;
      double cost_sum = 0.0;
      for (double c : cost)
        if (c < nu) {
          ++m;
          cost_sum += c;
        }
      if (m == 0) break;
      const double refined = (budget + cost_sum) / static_cast<double>(m);
      if (refined == nu) break;
      nu = refined;
    }
  }

  double rate = 0.0;
  for (std::size_t n = 0; n < gains.size(); ++n) {
    if (gains[n] > 0.0) {
      const double c = noise_plus_i / gains[n];
      if (c < nu) {
        out.p[n] = nu - c;
        rate += std::log2(nu / c);
      }
    }
  }
  out.rate_bps = bandwidth_w * rate;
  return out;
}

ConstantRateRun simulate_constant_rate_queues(int k, std::int64_t slots,
                                              std::int64_t warmup, double r_c_bps,
                                              const ArrivalConfig& cfg,
                                              double t_c_s, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("simulate_constant_rate_queues: k < 1");
  if (slots <= warmup)
    throw std::invalid_argument("simulate_constant_rate_queues: slots <= warmup");
  std::mt19937_64 rng(seed);
  std::vector<double> q(static_cast<std::size_t>(k), 0.0);
  double sum_m = 0.0, sum_m2 = 0.0;
  std::int64_t busy = 0, busy_total = 0;
  std::int64_t measured = 0;
  for (std::int64_t t = 0; t < slots; ++t) {
    double m = 0.0;
    for (auto& qi : q) {
      const double a = sample_arrivals(rng, cfg, t_c_s);
      qi = update_queue(qi, a, r_c_bps, t_c_s);
      m = std::max(m, qi);
      if (t >= warmup) {
        ++busy_total;
        if (qi > 0.0) ++busy;
      }
    }
    if (t >= warmup) {
      sum_m += m;
      sum_m2 += m * m;
      ++measured;
    }
  }
  ConstantRateRun run;
  const double n = static_cast<double>(measured);
  run.mean_m = sum_m / n;
  run.var_m = std::max(sum_m2 / n - run.mean_m * run.mean_m, 0.0);
  run.busy_fraction =
      static_cast<double>(busy) / static_cast<double>(busy_total);
  return run;
}

ConstantRateRun simulate_constant_rate_workload(int k, std::int64_t slots,
                                                std::int64_t warmup,
                                                double r_c_bps,
                                                double lambda_avg_bps,
                                                double t_c_s,
                                                std::uint64_t seed) {
  if (k < 1)
    throw std::invalid_argument("simulate_constant_rate_workload: k < 1");
  if (slots <= warmup)
    throw std::invalid_argument(
        "simulate_constant_rate_workload: slots <= warmup");
  if (!(r_c_bps > 0.0) || !(lambda_avg_bps > 0.0))
    throw std::invalid_argument(
        "simulate_constant_rate_workload: rates must be > 0");
  std::mt19937_64 rng(seed);
  const double gap_mean_s = 1.0 / lambda_avg_bps;
  struct PairState {
    double w = 0.0;     // workload right after the last arrival
    double t = 0.0;     // time of that arrival
    double next = 0.0;  // time of the next (already drawn) arrival
  };
  std::vector<PairState> st(static_cast<std::size_t>(k));
  for (auto& p : st) p.next = rng_exp(rng, gap_mean_s);

  double sum_m = 0.0, sum_m2 = 0.0;
  std::int64_t busy = 0, busy_total = 0, measured = 0;
  for (std::int64_t tslot = 1; tslot <= slots; ++tslot) {
    const double boundary = static_cast<double>(tslot) * t_c_s;
    double m = 0.0;
    for (auto& p : st) {
      while (p.next <= boundary) {
        p.w = std::max(p.w - r_c_bps * (p.next - p.t), 0.0) + 1.0;
        p.t = p.next;
        p.next += rng_exp(rng, gap_mean_s);
      }
      const double w_now = std::max(p.w - r_c_bps * (boundary - p.t), 0.0);
      m = std::max(m, w_now);
      if (tslot > warmup) {
        ++busy_total;
        if (w_now > 0.0) ++busy;
      }
    }
    if (tslot > warmup) {
      sum_m += m;
      sum_m2 += m * m;
      ++measured;
    }
  }
  ConstantRateRun run;
  const double n = static_cast<double>(measured);
  run.mean_m = sum_m / n;
  run.var_m = std::max(sum_m2 / n - run.mean_m * run.mean_m, 0.0);
  run.busy_fraction =
      static_cast<double>(busy) / static_cast<double>(busy_total);
  return run;
}

}  // namespace v2x
