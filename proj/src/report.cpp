#include "v2x/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "v2x/channel.hpp"
#include "v2x/mathx.hpp"

namespace v2x {

using nlohmann::json;

std::string csv_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write \"" + p.string() + "\"");
  return out;
}

double max_ccdf(double m, const BaselineModel& model, int k) {
  // Pr(max of k iid queues > m)
  const double single = baseline_ccdf(m, model);
  return 1.0 - std::pow(1.0 - single, k);
}

void write_ccdf(const std::filesystem::path& p, const RunReport& r) {
  std::ofstream out = open_out(p);
  out << "m_bits,empirical_ccdf,gev_ccdf,baseline_ccdf\n";
  const std::vector<double>& m = r.m_sorted;
  const double n = static_cast<double>(m.size());
  double prev = 2.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i + 1 < m.size() && m[i + 1] == m[i]) continue;  // last of a tie run
    const double emp = (n - static_cast<double>(i + 1)) / n;
    if (emp > prev + 1e-15)
      throw std::logic_error("ccdf column must be nonincreasing");
    prev = emp;
    const double gev =
        r.pooled_gev ? 1.0 - gev_cdf(m[i], *r.pooled_gev)
                     : std::numeric_limits<double>::quiet_NaN();
    const double base =
        r.baseline ? max_ccdf(m[i], *r.baseline, r.k_pairs)
                   : std::numeric_limits<double>::quiet_NaN();
    out << csv_num(m[i]) << ',' << csv_num(emp) << ',' << csv_num(gev) << ','
        << csv_num(base) << '\n';
  }
}

json report_row(const RunReport& r, const std::string& ccdf_file) {
  json row;
  row["scheme"] = scheme_name(r.scheme);
  row["v"] = r.v;
  row["k_pairs"] = r.k_pairs;
  row["l_blocklength"] = r.l_blocklength;
  row["eps"] = r.eps;
  row["pair_distance_m"] = r.pair_distance_m;
  row["seed"] = r.seed;
  row["slots"] = r.slots;
  row["warmup"] = r.warmup;
  row["empty_stats"] = r.empty_stats;
  row["avg_power_w"] = r.avg_power_w;
  row["avg_served_bps"] = r.avg_served_bps;
  row["avg_offered_bps"] = r.avg_offered_bps;
  row["mean_m_bits"] = r.mean_m_bits;
  row["var_m_bits2"] = r.var_m_bits2;
  row["avg_latency_s"] = r.avg_latency_s;
  row["indicator_fraction"] = r.indicator_fraction;
  row["ccdf_file"] = ccdf_file;
  if (r.pooled_gev) {
    row["gev"] = {{"mu_bits", r.pooled_gev->mu},
                  {"sigma_bits", r.pooled_gev->sigma},
                  {"xi", r.pooled_gev->xi}};
  }
  if (r.baseline) {
    row["baseline"] = {{"r_c_bps", r.baseline->r_c_bps},
                       {"theta_per_bit", r.baseline->theta},
                       {"p_busy", r.baseline->p_busy}};
    if (r.baseline_stats) {
      row["baseline"]["mean_m_bits"] = r.baseline_stats->mean;
      row["baseline"]["var_m_bits2"] = r.baseline_stats->var;
      row["baseline"]["mean_clamped"] = r.baseline_stats->mean_clamped;
    }
  }
  return row;
}

}  // namespace

void emit_reports(const ExperimentConfig& cfg,
                  const std::vector<RunReport>& reports,
                  const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create \"" + out_dir + "\"");

  {
    std::ofstream out = open_out(dir / "summary.csv");
    out << "scheme,v,k_pairs,l_blocklength,eps,pair_distance_m,seed,"
           "avg_power_w,avg_served_bps,avg_offered_bps,mean_m_bits,"
           "var_m_bits2,avg_latency_s,indicator_fraction\n";
    for (const RunReport& r : reports) {
      out << scheme_name(r.scheme) << ',' << csv_num(r.v) << ',' << r.k_pairs
          << ',' << r.l_blocklength << ',' << csv_num(r.eps) << ','
          << csv_num(r.pair_distance_m) << ',' << r.seed << ','
          << csv_num(r.avg_power_w) << ',' << csv_num(r.avg_served_bps) << ','
          << csv_num(r.avg_offered_bps) << ',' << csv_num(r.mean_m_bits) << ','
          << csv_num(r.var_m_bits2) << ',' << csv_num(r.avg_latency_s) << ','
          << csv_num(r.indicator_fraction) << '\n';
    }
  }
  {
    std::ofstream out = open_out(dir / "gev_params.csv");
    out << "scheme,v,k_pairs,mu_bits,sigma_bits,xi\n";
    for (const RunReport& r : reports) {
      out << scheme_name(r.scheme) << ',' << csv_num(r.v) << ',' << r.k_pairs
          << ',';
      if (r.pooled_gev) {
        out << csv_num(r.pooled_gev->mu) << ',' << csv_num(r.pooled_gev->sigma)
            << ',' << csv_num(r.pooled_gev->xi) << '\n';
      } else {
        out << "nan,nan,nan\n";
      }
    }
  }
  json jr;
  jr["rows"] = json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const std::string name = "ccdf_" + std::to_string(i) + ".csv";
    if (!reports[i].empty_stats) write_ccdf(dir / name, reports[i]);
    jr["rows"].push_back(
        report_row(reports[i], reports[i].empty_stats ? "" : name));
  }
  {
    std::ofstream out = open_out(dir / "config.json");
    out << config_to_json_text(cfg);
  }
  {
    std::ofstream out = open_out(dir / "report.json");
    out << jr.dump(2) << '\n';
  }
}

RatioTable throughput_ratio_table(const ExperimentConfig& cfg,
                                  const std::vector<std::int64_t>& l_values,
                                  const std::vector<double>& eps_values,
                                  const std::vector<double>& distance_values,
                                  int draws, std::uint64_t seed) {
  if (draws < 1) throw std::invalid_argument("ratio table: draws must be >= 1");
  const PathLossParams pl = cfg.path_loss_params();
  const double noise_plus_i = cfg.noise_floor_w() + cfg.interference_w();
  const double p = cfg.p_max_w();

  std::mt19937_64 rng(seed);
  std::vector<double> fading(static_cast<std::size_t>(draws));
  for (double& x : fading) x = rng_exp(rng, 1.0);

  RatioTable table;
  for (double d : distance_values) {
    const double gain =
        pl.l0 * std::pow(std::max(d, pl.min_distance_m), -pl.alpha);
    const double scale = p * gain / noise_plus_i;
    for (std::int64_t l : l_values) {
      double denom = 0.0;
      for (double x : fading)
        denom += finite_blocklength_rate(scale * x, static_cast<double>(l), 0.5);
      for (double eps : eps_values) {
        double numer = 0.0;
        for (double x : fading)
          numer +=
              finite_blocklength_rate(scale * x, static_cast<double>(l), eps);
        RatioRow row;
        row.l_blocklength = l;
        row.eps = eps;
        row.pair_distance_m = d;
        row.ratio = numer / denom;
        table.rows.push_back(row);
      }
    }
  }
  return table;
}

void emit_ratio_table(const RatioTable& table, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create \"" + out_dir + "\"");
  std::ofstream out = open_out(dir / "ratio_table.csv");
  out << "l_blocklength,eps,pair_distance_m,throughput_ratio\n";
  for (const RatioRow& r : table.rows) {
    out << r.l_blocklength << ',' << csv_num(r.eps) << ','
        << csv_num(r.pair_distance_m) << ',' << csv_num(r.ratio) << '\n';
  }
}

}  // namespace v2x
