#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "v2x/channel.hpp"
#include "v2x/mobility.hpp"
#include "v2x/queueing.hpp"

namespace v2x {

enum class Scheme { RsuAided, EvtDistributed, BaselineConstantRate };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct ChannelConfig {
  double l0_db = -68.5;
  double l0p_db = -54.5;
  double alpha = 1.61;
  double delta_m = 15.0;
  double n0_dbm_hz = -174.0;
  double w_hz = 180e3;
  double interference_dbm = -88.0;
  double eps = 0.5;
  std::int64_t l_blocklength = 0;  // 0: derive round(w_hz * t_c_s)
};

struct ClusteringConfig {
  double zeta_m = 30.0;
  double phi_m = 150.0;
  int g_groups = 10;
  std::int64_t t0_slots = 100;
};

struct QueueingConfig {
  double lambda_avg_bps = 0.5e6;
  double m_th_bits = 225e3;
  double b_th_bits2 = 2.9e10;
  std::optional<double> delta;       // entropic-risk pair; both present
  std::optional<double> kappa_bits;  // overrides b_th_bits2
};

struct EvtConfig {
  double psi = 1e-2;
  int min_exceedances = 20;
  std::int64_t recompute_period = 1;
};

struct PowerConfig {
  double v = 3e6;
  double p_max_dbm = 10.0;
  int n_rb = 20;
  double weight_unit_bits = 1000.0;  // queue-scale divisor inside the weights
};

struct BaselineConfig {
  std::optional<double> r_c_bps;
  bool auto_match = false;  // derive r_c from a matched RsuAided run
  std::optional<double> p_busy;
};

struct SweepConfig {
  std::vector<double> v_values;
  std::vector<int> k_values;
  std::vector<std::int64_t> l_values;
  std::vector<double> eps_values;
  std::vector<double> distance_values;
};

struct ExperimentConfig {
  std::uint64_t seed = 4;
  Scheme scheme = Scheme::RsuAided;
  std::int64_t slots = 20000;  // measurement slots
  std::int64_t warmup = 2000;
  double t_c_s = 3e-3;
  std::string out_dir = "out";

  MobilityConfig mobility;
  ChannelConfig channel;
  ClusteringConfig clustering;
  QueueingConfig queueing;
  EvtConfig evt;
  PowerConfig power;
  BaselineConfig baseline;
  SweepConfig sweep;

  double noise_floor_w() const;    // N0 * W in watts
  double interference_w() const;   // I in watts
  double p_max_w() const;          // per-RB cap in watts
  std::int64_t blocklength() const;
  PathLossParams path_loss_params() const;
  ArrivalConfig arrivals() const;
  QueueThresholds thresholds() const;  // applies the delta/kappa override

  void validate() const;  // throws std::invalid_argument naming the field
};

// Load from a JSON file; an empty (or whitespace-only) file means all
// defaults. Unknown keys are rejected with the offending key in the message.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& cfg);

}  // namespace v2x
