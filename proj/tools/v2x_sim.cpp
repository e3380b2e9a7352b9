#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "v2x/config.hpp"
#include "v2x/engine.hpp"
#include "v2x/report.hpp"

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

void apply_sweep_arg(v2x::ExperimentConfig& cfg, const std::string& arg) {
  const std::size_t eq = arg.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("--sweep expects KEY=v1,v2,... got \"" + arg +
                                "\"");
  const std::string key = arg.substr(0, eq);
  const std::vector<std::string> parts = split(arg.substr(eq + 1), ',');
  if (parts.empty() || parts.front().empty())
    throw std::invalid_argument("--sweep " + key + ": empty value list");
  try {
    if (key == "v") {
      cfg.sweep.v_values.clear();
      for (const auto& p : parts) cfg.sweep.v_values.push_back(std::stod(p));
    } else if (key == "k") {
      cfg.sweep.k_values.clear();
      for (const auto& p : parts) cfg.sweep.k_values.push_back(std::stoi(p));
    } else if (key == "l") {
      cfg.sweep.l_values.clear();
      for (const auto& p : parts) cfg.sweep.l_values.push_back(std::stoll(p));
    } else if (key == "eps") {
      cfg.sweep.eps_values.clear();
      for (const auto& p : parts) cfg.sweep.eps_values.push_back(std::stod(p));
    } else if (key == "distance") {
      cfg.sweep.distance_values.clear();
      for (const auto& p : parts)
        cfg.sweep.distance_values.push_back(std::stod(p));
    } else {
      throw std::invalid_argument("--sweep: unknown key \"" + key +
                                  "\" (expected v, k, l, eps or distance)");
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("--sweep " + key + ": bad numeric value");
  }
}

template <typename T>
std::vector<T> or_single(const std::vector<T>& list, T fallback) {
  return list.empty() ? std::vector<T>{fallback} : list;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slotted V2V power-allocation simulator"};
  std::string config_path, out_dir, scheme;
  std::uint64_t seed = 0;
  std::int64_t slots = -1, warmup = -1;
  std::vector<std::string> sweep_args;
  bool ratio_table = false, print_config = false;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--scheme", scheme, "rsu | evt | baseline");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed");
  app.add_option("--slots", slots, "measurement slots");
  app.add_option("--warmup", warmup, "warmup slots (excluded from stats)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--sweep", sweep_args,
                 "KEY=v1,v2,... with KEY in {v,k,l,eps,distance}; repeatable");
  app.add_flag("--ratio-table", ratio_table,
               "emit the finite-blocklength throughput-ratio table and exit");
  app.add_flag("--print-config", print_config,
               "print the effective config as JSON and exit");
  CLI11_PARSE(app, argc, argv);

  try {
    v2x::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = v2x::parse_config(config_path);
    if (!scheme.empty()) cfg.scheme = v2x::scheme_from_name(scheme);
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (slots >= 0) cfg.slots = slots;
    if (warmup >= 0) cfg.warmup = warmup;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    for (const std::string& arg : sweep_args) apply_sweep_arg(cfg, arg);
    cfg.validate();

    if (print_config) {
      std::cout << v2x::config_to_json_text(cfg);
      return 0;
    }

    if (ratio_table) {
      std::vector<std::int64_t> ls = cfg.sweep.l_values.empty()
                                         ? std::vector<std::int64_t>{300, 800}
                                         : cfg.sweep.l_values;
      std::vector<double> epss = cfg.sweep.eps_values.empty()
                                     ? std::vector<double>{1e-9, 1e-5}
                                     : cfg.sweep.eps_values;
      std::vector<double> dists = cfg.sweep.distance_values.empty()
                                      ? std::vector<double>{15.0, 100.0}
                                      : cfg.sweep.distance_values;
      const v2x::RatioTable table = v2x::throughput_ratio_table(
          cfg, ls, epss, dists, 200000, cfg.seed);
      v2x::emit_ratio_table(table, cfg.out_dir);
      for (const auto& row : table.rows) {
        std::cout << "L=" << row.l_blocklength << " eps=" << row.eps
                  << " d=" << row.pair_distance_m << " ratio=" << row.ratio
                  << "\n";
      }
      std::cout << "wrote " << cfg.out_dir << "/ratio_table.csv\n";
      return 0;
    }

    const std::vector<double> vs = or_single(cfg.sweep.v_values, cfg.power.v);
    const std::vector<int> ks = or_single(cfg.sweep.k_values, cfg.mobility.k_pairs);
    const std::vector<std::int64_t> ls =
        or_single(cfg.sweep.l_values, cfg.channel.l_blocklength > 0
                                          ? cfg.channel.l_blocklength
                                          : cfg.blocklength());
    const std::vector<double> epss = or_single(cfg.sweep.eps_values, cfg.channel.eps);
    const std::vector<double> dists =
        or_single(cfg.sweep.distance_values, cfg.mobility.pair_distance_m);

    std::vector<v2x::RunReport> reports;
    for (double v : vs)
      for (int k : ks)
        for (std::int64_t l : ls)
          for (double eps : epss)
            for (double dist : dists) {
              v2x::ExperimentConfig c = cfg;
              c.power.v = v;
              c.mobility.k_pairs = k;
              c.channel.l_blocklength = l;
              c.channel.eps = eps;
              c.mobility.pair_distance_m = dist;
              c.validate();
              if (c.scheme == v2x::Scheme::BaselineConstantRate &&
                  !c.baseline.r_c_bps.has_value()) {
                if (!c.baseline.auto_match) {
                  throw std::invalid_argument(
                      "baseline scheme needs baseline.r_c_bps or "
                      "baseline.auto_match");
                }
                v2x::ExperimentConfig ref_cfg = c;
                ref_cfg.scheme = v2x::Scheme::RsuAided;
                const v2x::RunReport ref = v2x::run_simulation(ref_cfg);
                if (ref.avg_offered_bps <= c.queueing.lambda_avg_bps) {
                  throw std::runtime_error(
                      "auto-match found no stable reference rate");
                }
                c.baseline.r_c_bps = ref.avg_offered_bps;
              }
              const v2x::RunReport r = v2x::run_simulation(c);
              std::cout << "run scheme=" << v2x::scheme_name(r.scheme)
                        << " v=" << r.v << " k=" << r.k_pairs
                        << " power_w=" << r.avg_power_w
                        << " offered_bps=" << r.avg_offered_bps
                        << " mean_m_bits=" << r.mean_m_bits << "\n";
              reports.push_back(r);
            }
    v2x::emit_reports(cfg, reports, cfg.out_dir);
    std::cout << "wrote " << reports.size() << " run(s) to " << cfg.out_dir
              << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
