#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "v2x/baseline.hpp"
#include "v2x/clustering.hpp"
#include "v2x/config.hpp"
#include "v2x/evt.hpp"
#include "v2x/mobility.hpp"
#include "v2x/power.hpp"
#include "v2x/queueing.hpp"

namespace v2x {

struct SlotMetrics {
  double total_power_w = 0.0;
  std::vector<double> rate_bps;  // offered (allocated) rate per pair
  double served_bits = 0.0;      // bits actually drained this slot, all pairs
  double m_bits = 0.0;           // max post-update queue
  double vq_m = 0.0;             // global level, or mean local level
  double vq_b = 0.0;
  int indicator_on = 0;          // pairs whose weight used the full cubic block
  double sum_q_bits = 0.0;       // total backlog after the update
};

struct RunReport {
  Scheme scheme = Scheme::RsuAided;
  double v = 0.0;
  int k_pairs = 0;
  std::int64_t l_blocklength = 0;
  double eps = 0.5;
  double pair_distance_m = 0.0;
  std::uint64_t seed = 0;
  std::int64_t slots = 0;
  std::int64_t warmup = 0;

  double avg_power_w = 0.0;
  double avg_served_bps = 0.0;   // per pair
  double avg_offered_bps = 0.0;  // per pair
  double mean_m_bits = 0.0;
  double var_m_bits2 = 0.0;
  double avg_latency_s = 0.0;
  double indicator_fraction = 0.0;
  bool empty_stats = false;  // zero measurement slots

  std::vector<double> m_sorted;           // ascending M(t) samples
  std::optional<GevParams> pooled_gev;    // fit over pooled per-pair samples
  std::optional<BaselineModel> baseline;  // model run (baseline scheme) or
                                          // throughput-matched reference
  std::optional<BaselineMaxStats> baseline_stats;
};

class Simulation {
 public:
  explicit Simulation(const ExperimentConfig& cfg);

  // One slot: recluster when due, then mobility / fading / arrivals /
  // weights / water-filling / service / queue and virtual-queue updates.
  SlotMetrics run_slot();

  // Warmup plus measurement slots, with accumulation into a RunReport.
  RunReport run();

  std::int64_t slot() const { return slot_; }
  const std::vector<double>& queues() const { return q_; }
  const GroupAssignment& groups() const { return groups_; }
  const std::vector<VehiclePair>& pairs() const { return pairs_; }
  const VirtualQueuePair& global_vq() const { return vq_global_; }
  const std::vector<VirtualQueuePair>& local_vq() const { return vq_local_; }
  const std::optional<GevParams>& local_gev(int k) const { return gev_[k]; }

 private:
  void recluster();

  ExperimentConfig cfg_;
  int k_ = 0;
  double p_max_w_ = 0.0;
  double noise_plus_i_ = 0.0;
  double blocklength_ = 0.0;
  double unit_ = 1.0;  // weight normalization scale, bits
  QueueThresholds th_;
  ArrivalConfig arrival_;
  PathLossParams pl_;

  std::mt19937_64 rng_;
  RoadNetwork net_;
  std::vector<VehiclePair> pairs_;
  GroupAssignment groups_;
  std::vector<double> q_;  // bits
  VirtualQueuePair vq_global_;
  std::vector<VirtualQueuePair> vq_local_;
  std::vector<QueueHistory> hist_;  // per pair, in units of `unit_`
  std::vector<std::optional<GevParams>> gev_;  // normalized scale
  std::int64_t slot_ = 0;

  // reused slot buffers
  std::vector<double> gains_;
  std::vector<double> arrivals_;
};

RunReport run_simulation(const ExperimentConfig& cfg);

}  // namespace v2x
