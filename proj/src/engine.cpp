#include "v2x/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "v2x/channel.hpp"
#include "v2x/mathx.hpp"

namespace v2x {

Simulation::Simulation(const ExperimentConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  if (cfg_.scheme == Scheme::BaselineConstantRate &&
      !cfg_.baseline.r_c_bps.has_value()) {
    throw std::invalid_argument(
        "engine: baseline scheme needs a resolved baseline.r_c_bps");
  }
  k_ = cfg_.mobility.k_pairs;
  p_max_w_ = cfg_.p_max_w();
  noise_plus_i_ = cfg_.noise_floor_w() + cfg_.interference_w();
  blocklength_ = static_cast<double>(cfg_.blocklength());
  unit_ = cfg_.power.weight_unit_bits;
  th_ = cfg_.thresholds();
  arrival_ = cfg_.arrivals();
  pl_ = cfg_.path_loss_params();

  rng_.seed(cfg_.seed);
  auto [net, pairs] = init_topology(cfg_.mobility, rng_);
  net_ = std::move(net);
  pairs_ = std::move(pairs);
  q_.assign(static_cast<std::size_t>(k_), 0.0);
  vq_local_.assign(static_cast<std::size_t>(k_), VirtualQueuePair{});
  hist_.resize(static_cast<std::size_t>(k_));
  gev_.assign(static_cast<std::size_t>(k_), std::nullopt);
  arrivals_.assign(static_cast<std::size_t>(k_), 0.0);
}

void Simulation::recluster() {
  std::vector<Vec2> mids(pairs_.size());
  for (std::size_t i = 0; i < pairs_.size(); ++i)
    mids[i] = pair_midpoint(pairs_[i], net_);
  const SimilarityMatrix s =
      similarity_matrix(mids, cfg_.clustering.zeta_m, cfg_.clustering.phi_m, net_);
  const int g = std::min(cfg_.clustering.g_groups, k_);
  const std::vector<int> group_of = spectral_cluster(s, g, rng_);
  groups_ = allocate_rbs(group_of, g, cfg_.power.n_rb);
}

SlotMetrics Simulation::run_slot() {
  if (slot_ % cfg_.clustering.t0_slots == 0) recluster();

  // (1) mobility
  step_positions(pairs_, net_, cfg_.t_c_s, rng_);

  // (2) fading on own links
  gains_ = sample_own_gains(pairs_, net_, pl_, cfg_.power.n_rb, rng_);

  // (3) arrivals, observed before the power decision
  for (int k = 0; k < k_; ++k)
    arrivals_[k] = sample_arrivals(rng_, arrival_, cfg_.t_c_s);

  SlotMetrics m;
  m.rate_bps.assign(static_cast<std::size_t>(k_), 0.0);

  const double w = cfg_.channel.w_hz;
  const double t_c = cfg_.t_c_s;
  const int n_rb = cfg_.power.n_rb;
  std::vector<double> rb_gains;
  std::vector<double> q_next(static_cast<std::size_t>(k_), 0.0);

  for (int k = 0; k < k_; ++k) {
    const auto& rbs = groups_.rb_sets[k];
    rb_gains.resize(rbs.size());
    for (std::size_t i = 0; i < rbs.size(); ++i)
      rb_gains[i] = gains_[static_cast<std::size_t>(k) * n_rb + rbs[i]];

    // (4) weight, (5) water-filling
    double rate = 0.0;
    double power = 0.0;
    if (cfg_.scheme == Scheme::BaselineConstantRate) {
      const double r_c = *cfg_.baseline.r_c_bps;
      if (!rbs.empty()) {
        const InversionResult inv = invert_rate(
            r_c, rb_gains, noise_plus_i_, w,
            static_cast<double>(n_rb) * p_max_w_);
        rate = std::min(inv.rate_bps, r_c);
        for (double p : inv.p) power += p;
      }
      ++m.indicator_on;  // no support gating in the baseline
    } else {
      const double qn = q_[k] / unit_;
      const double an = arrivals_[k] / unit_;
      double j = 0.0;
      if (cfg_.scheme == Scheme::RsuAided) {
        const VirtualQueuePair vqn{vq_global_.q_m / unit_,
                                   vq_global_.q_b / (unit_ * unit_)};
        j = weight_rsu(vqn, qn, an, w, t_c);
        ++m.indicator_on;
      } else {
        const VirtualQueuePair vqn{vq_local_[k].q_m / unit_,
                                   vq_local_[k].q_b / (unit_ * unit_)};
        j = weight_evt(vqn, qn, an, gev_[k], w, t_c);
        if (!gev_[k] || gev_support_contains(qn + an, *gev_[k]))
          ++m.indicator_on;
      }
      if (j > 0.0 && !rbs.empty()) {
        const PowerDecision dec =
            waterfill(j, cfg_.power.v, rb_gains, noise_plus_i_,
                      static_cast<double>(n_rb) * p_max_w_);
        for (std::size_t i = 0; i < rbs.size(); ++i) {
          if (dec.p[i] > 0.0) {
            const double gamma = dec.p[i] * rb_gains[i] / noise_plus_i_;
            rate += w * finite_blocklength_rate(gamma, blocklength_,
                                                cfg_.channel.eps);
            power += dec.p[i];
          }
        }
      }
    }

    // (6) service and queue update
    m.rate_bps[k] = rate;
    m.total_power_w += power;
    const double served = std::min(q_[k] + arrivals_[k], t_c * rate);
    m.served_bits += served;
    q_next[k] = update_queue(q_[k], arrivals_[k], rate, t_c);
  }

  // (7) network max, estimator refresh, virtual queues
  q_ = q_next;
  m.m_bits = network_max(q_);
  if (cfg_.scheme == Scheme::RsuAided) {
    update_virtual_global(vq_global_, m.m_bits, th_);
    m.vq_m = vq_global_.q_m;
    m.vq_b = vq_global_.q_b;
  } else if (cfg_.scheme == Scheme::EvtDistributed) {
    const bool refresh = (slot_ + 1) % cfg_.evt.recompute_period == 0;
    for (int k = 0; k < k_; ++k) {
      hist_[k].push(q_[k] / unit_);
      if (refresh)
        gev_[k] = estimate_gev_local(hist_[k], cfg_.evt.psi, k_,
                                     cfg_.evt.min_exceedances);
      std::optional<GevParams> raw;
      if (gev_[k])
        raw = GevParams{gev_[k]->mu * unit_, gev_[k]->sigma * unit_,
                        gev_[k]->xi};
      update_virtual_local(vq_local_[k], q_[k], raw, th_);
      m.vq_m += vq_local_[k].q_m / k_;
      m.vq_b += vq_local_[k].q_b / k_;
    }
  }

  // (8) metrics
  for (double qi : q_) m.sum_q_bits += qi;
  ++slot_;
  return m;
}

RunReport Simulation::run() {
  RunReport r;
  r.scheme = cfg_.scheme;
  r.v = cfg_.power.v;
  r.k_pairs = k_;
  r.l_blocklength = cfg_.blocklength();
  r.eps = cfg_.channel.eps;
  r.pair_distance_m = cfg_.mobility.pair_distance_m;
  r.seed = cfg_.seed;
  r.slots = cfg_.slots;
  r.warmup = cfg_.warmup;

  for (std::int64_t t = 0; t < cfg_.warmup; ++t) run_slot();

  if (cfg_.slots == 0) {
    r.empty_stats = true;
    return r;
  }

  double sum_p = 0.0, sum_served = 0.0, sum_offered = 0.0;
  double sum_m = 0.0, sum_m2 = 0.0, sum_q = 0.0, sum_ind = 0.0;
  std::vector<double> pooled;
  pooled.reserve(static_cast<std::size_t>(cfg_.slots) * k_);
  r.m_sorted.reserve(static_cast<std::size_t>(cfg_.slots));
  for (std::int64_t t = 0; t < cfg_.slots; ++t) {
    const SlotMetrics m = run_slot();
    sum_p += m.total_power_w;
    sum_served += m.served_bits;
    for (double rate : m.rate_bps) sum_offered += rate;
    sum_m += m.m_bits;
    sum_m2 += m.m_bits * m.m_bits;
    sum_q += m.sum_q_bits;
    sum_ind += static_cast<double>(m.indicator_on) / k_;
    r.m_sorted.push_back(m.m_bits);
    for (double qi : q_) pooled.push_back(qi);
  }
  const double n = static_cast<double>(cfg_.slots);
  r.avg_power_w = sum_p / n;
  r.avg_served_bps = sum_served / (n * cfg_.t_c_s * k_);
  r.avg_offered_bps = sum_offered / (n * k_);
  r.mean_m_bits = sum_m / n;
  r.var_m_bits2 = std::max(sum_m2 / n - r.mean_m_bits * r.mean_m_bits, 0.0);
  if (cfg_.queueing.lambda_avg_bps > 0.0)
    r.avg_latency_s = (sum_q / n) / (k_ * cfg_.queueing.lambda_avg_bps);
  r.indicator_fraction = sum_ind / n;
  std::sort(r.m_sorted.begin(), r.m_sorted.end());

  const QueueHistory pooled_hist = QueueHistory::from_samples(std::move(pooled));
  r.pooled_gev = estimate_gev_local(pooled_hist, cfg_.evt.psi, k_,
                                    cfg_.evt.min_exceedances);

  // Reference constant-rate model: the scheme's own r_c for baseline runs,
  // else a throughput-matched one when the measured offered rate is stable.
  double r_c = 0.0;
  if (cfg_.scheme == Scheme::BaselineConstantRate)
    r_c = *cfg_.baseline.r_c_bps;
  else if (r.avg_offered_bps > cfg_.queueing.lambda_avg_bps)
    r_c = r.avg_offered_bps;
  if (r_c > cfg_.queueing.lambda_avg_bps) {
    r.baseline =
        make_baseline(r_c, arrival_.lambda_avg_bps, cfg_.baseline.p_busy);
    r.baseline_stats = baseline_max_stats(k_, *r.baseline);
  }
  return r;
}

RunReport run_simulation(const ExperimentConfig& cfg) {
  Simulation sim(cfg);
  return sim.run();
}

}  // namespace v2x
