#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "v2x/engine.hpp"

namespace v2x {

// Shortest stable formatting used in every CSV cell (printf %.10g).
std::string csv_num(double x);

// Writes summary.csv, gev_params.csv, one ccdf_<i>.csv per report, the
// effective config echo (config.json) and a structured report.json into
// out_dir (created if missing).
void emit_reports(const ExperimentConfig& cfg,
                  const std::vector<RunReport>& reports,
                  const std::string& out_dir);

struct RatioRow {
  std::int64_t l_blocklength = 0;
  double eps = 0.0;
  double pair_distance_m = 0.0;
  double ratio = 0.0;  // mean R_f(L, eps) / mean R_f(L, 0.5), over fading
};

struct RatioTable {
  std::vector<RatioRow> rows;
};

// Monte Carlo over own-link fading at full per-RB power. One shared fading
// sample is reused for every (L, eps, distance) cell.
RatioTable throughput_ratio_table(const ExperimentConfig& cfg,
                                  const std::vector<std::int64_t>& l_values,
                                  const std::vector<double>& eps_values,
                                  const std::vector<double>& distance_values,
                                  int draws, std::uint64_t seed);

void emit_ratio_table(const RatioTable& table, const std::string& out_dir);

}  // namespace v2x
