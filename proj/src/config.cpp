#include "v2x/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace v2x {

using nlohmann::json;

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::RsuAided: return "rsu";
    case Scheme::EvtDistributed: return "evt";
    case Scheme::BaselineConstantRate: return "baseline";
  }
  throw std::logic_error("unreachable scheme");
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "rsu") return Scheme::RsuAided;
  if (name == "evt") return Scheme::EvtDistributed;
  if (name == "baseline") return Scheme::BaselineConstantRate;
  throw std::invalid_argument("unknown scheme \"" + name +
                              "\" (expected rsu, evt or baseline)");
}

namespace {

double dbm_to_w(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

void check_keys(const json& j, const std::string& section,
                std::initializer_list<const char*> known) {
  if (!j.is_object()) fail("section \"" + section + "\" must be an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      fail("unknown key \"" + item.key() + "\" in section \"" + section + "\"");
  }
}

double num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    fail(std::string("key \"") + key + "\" must be a number");
  return j.at(key).get<double>();
}

std::int64_t inum(const json& j, const char* key, std::int64_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer())
    fail(std::string("key \"") + key + "\" must be an integer");
  return j.at(key).get<std::int64_t>();
}

std::string str(const json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string())
    fail(std::string("key \"") + key + "\" must be a string");
  return j.at(key).get<std::string>();
}

bool boolean(const json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean())
    fail(std::string("key \"") + key + "\" must be a boolean");
  return j.at(key).get<bool>();
}

std::optional<double> opt_num(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number())
    fail(std::string("key \"") + key + "\" must be a number or null");
  return j.at(key).get<double>();
}

template <typename T>
std::vector<T> num_list(const json& j, const char* key) {
  std::vector<T> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array())
    fail(std::string("key \"") + key + "\" must be an array of numbers");
  for (const auto& e : j.at(key)) {
    if (!e.is_number())
      fail(std::string("key \"") + key + "\" must be an array of numbers");
    out.push_back(e.get<T>());
  }
  return out;
}

ExperimentConfig from_json(const json& j) {
  ExperimentConfig cfg;
  check_keys(j, "(root)",
             {"seed", "scheme", "slots", "warmup", "t_c_s", "out_dir",
              "mobility", "channel", "clustering", "queueing", "evt", "power",
              "baseline", "sweep"});
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
      fail("key \"seed\" must be a nonnegative integer");
    if (j.at("seed").is_number_integer() && j.at("seed").get<std::int64_t>() < 0)
      fail("key \"seed\" must be a nonnegative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  cfg.scheme = scheme_from_name(str(j, "scheme", scheme_name(cfg.scheme)));
  cfg.slots = inum(j, "slots", cfg.slots);
  cfg.warmup = inum(j, "warmup", cfg.warmup);
  cfg.t_c_s = num(j, "t_c_s", cfg.t_c_s);
  cfg.out_dir = str(j, "out_dir", cfg.out_dir);

  if (j.contains("mobility")) {
    const json& m = j.at("mobility");
    check_keys(m, "mobility",
               {"area_side_m", "lane_spacing_m", "speed_kmh", "pair_distance_m",
                "k_pairs"});
    cfg.mobility.area_side_m = num(m, "area_side_m", cfg.mobility.area_side_m);
    cfg.mobility.lane_spacing_m =
        num(m, "lane_spacing_m", cfg.mobility.lane_spacing_m);
    cfg.mobility.speed_kmh = num(m, "speed_kmh", cfg.mobility.speed_kmh);
    cfg.mobility.pair_distance_m =
        num(m, "pair_distance_m", cfg.mobility.pair_distance_m);
    cfg.mobility.k_pairs =
        static_cast<int>(inum(m, "k_pairs", cfg.mobility.k_pairs));
  }
  if (j.contains("channel")) {
    const json& c = j.at("channel");
    check_keys(c, "channel",
               {"l0_db", "l0p_db", "alpha", "delta_m", "n0_dbm_hz", "w_hz",
                "interference_dbm", "eps", "l_blocklength"});
    cfg.channel.l0_db = num(c, "l0_db", cfg.channel.l0_db);
    cfg.channel.l0p_db = num(c, "l0p_db", cfg.channel.l0p_db);
    cfg.channel.alpha = num(c, "alpha", cfg.channel.alpha);
    cfg.channel.delta_m = num(c, "delta_m", cfg.channel.delta_m);
    cfg.channel.n0_dbm_hz = num(c, "n0_dbm_hz", cfg.channel.n0_dbm_hz);
    cfg.channel.w_hz = num(c, "w_hz", cfg.channel.w_hz);
    cfg.channel.interference_dbm =
        num(c, "interference_dbm", cfg.channel.interference_dbm);
    cfg.channel.eps = num(c, "eps", cfg.channel.eps);
    cfg.channel.l_blocklength =
        inum(c, "l_blocklength", cfg.channel.l_blocklength);
  }
  if (j.contains("clustering")) {
    const json& c = j.at("clustering");
    check_keys(c, "clustering", {"zeta_m", "phi_m", "g_groups", "t0_slots"});
    cfg.clustering.zeta_m = num(c, "zeta_m", cfg.clustering.zeta_m);
    cfg.clustering.phi_m = num(c, "phi_m", cfg.clustering.phi_m);
    cfg.clustering.g_groups =
        static_cast<int>(inum(c, "g_groups", cfg.clustering.g_groups));
    cfg.clustering.t0_slots = inum(c, "t0_slots", cfg.clustering.t0_slots);
  }
  if (j.contains("queueing")) {
    const json& q = j.at("queueing");
    check_keys(q, "queueing",
               {"lambda_avg_bps", "m_th_bits", "b_th_bits2", "delta",
                "kappa_bits"});
    cfg.queueing.lambda_avg_bps =
        num(q, "lambda_avg_bps", cfg.queueing.lambda_avg_bps);
    cfg.queueing.m_th_bits = num(q, "m_th_bits", cfg.queueing.m_th_bits);
    cfg.queueing.b_th_bits2 = num(q, "b_th_bits2", cfg.queueing.b_th_bits2);
    cfg.queueing.delta = opt_num(q, "delta");
    cfg.queueing.kappa_bits = opt_num(q, "kappa_bits");
  }
  if (j.contains("evt")) {
    const json& e = j.at("evt");
    check_keys(e, "evt", {"psi", "min_exceedances", "recompute_period"});
    cfg.evt.psi = num(e, "psi", cfg.evt.psi);
    cfg.evt.min_exceedances =
        static_cast<int>(inum(e, "min_exceedances", cfg.evt.min_exceedances));
    cfg.evt.recompute_period =
        inum(e, "recompute_period", cfg.evt.recompute_period);
  }
  if (j.contains("power")) {
    const json& p = j.at("power");
    check_keys(p, "power", {"v", "p_max_dbm", "n_rb", "weight_unit_bits"});
    cfg.power.v = num(p, "v", cfg.power.v);
    cfg.power.p_max_dbm = num(p, "p_max_dbm", cfg.power.p_max_dbm);
    cfg.power.n_rb = static_cast<int>(inum(p, "n_rb", cfg.power.n_rb));
    cfg.power.weight_unit_bits =
        num(p, "weight_unit_bits", cfg.power.weight_unit_bits);
  }
  if (j.contains("baseline")) {
    const json& b = j.at("baseline");
    check_keys(b, "baseline", {"r_c_bps", "auto_match", "p_busy"});
    cfg.baseline.r_c_bps = opt_num(b, "r_c_bps");
    cfg.baseline.auto_match = boolean(b, "auto_match", cfg.baseline.auto_match);
    cfg.baseline.p_busy = opt_num(b, "p_busy");
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    check_keys(s, "sweep",
               {"v_values", "k_values", "l_values", "eps_values",
                "distance_values"});
    cfg.sweep.v_values = num_list<double>(s, "v_values");
    cfg.sweep.k_values = num_list<int>(s, "k_values");
    cfg.sweep.l_values = num_list<std::int64_t>(s, "l_values");
    cfg.sweep.eps_values = num_list<double>(s, "eps_values");
    cfg.sweep.distance_values = num_list<double>(s, "distance_values");
  }
  cfg.validate();
  return cfg;
}

}  // namespace

double ExperimentConfig::noise_floor_w() const {
  return dbm_to_w(channel.n0_dbm_hz) * channel.w_hz;
}

double ExperimentConfig::interference_w() const {
  return dbm_to_w(channel.interference_dbm);
}

double ExperimentConfig::p_max_w() const { return dbm_to_w(power.p_max_dbm); }

std::int64_t ExperimentConfig::blocklength() const {
  if (channel.l_blocklength > 0) return channel.l_blocklength;
  return static_cast<std::int64_t>(std::llround(channel.w_hz * t_c_s));
}

PathLossParams ExperimentConfig::path_loss_params() const {
  PathLossParams p;
  p.l0 = db_to_linear(channel.l0_db);
  p.l0_prime = db_to_linear(channel.l0p_db);
  p.alpha = channel.alpha;
  p.delta_m = channel.delta_m;
  return p;
}

ArrivalConfig ExperimentConfig::arrivals() const {
  ArrivalConfig a;
  a.lambda_avg_bps = queueing.lambda_avg_bps;
  return a;
}

QueueThresholds ExperimentConfig::thresholds() const {
  QueueThresholds th;
  th.m_th = queueing.m_th_bits;
  th.b_th = queueing.b_th_bits2;
  if (queueing.delta || queueing.kappa_bits) {
    th.b_th = risk_to_thresholds(queueing.delta.value_or(0.0),
                                 queueing.kappa_bits.value_or(0.0), th.m_th);
  }
  return th;
}

void ExperimentConfig::validate() const {
  if (slots < 0) fail("slots must be >= 0");
  if (warmup < 0) fail("warmup must be >= 0");
  if (t_c_s <= 0.0) fail("t_c_s must be > 0");
  if (out_dir.empty()) fail("out_dir must be nonempty");
  if (mobility.k_pairs < 1) fail("mobility.k_pairs must be >= 1");
  if (mobility.area_side_m <= 0.0) fail("mobility.area_side_m must be > 0");
  if (mobility.lane_spacing_m <= 0.0 ||
      mobility.lane_spacing_m > mobility.area_side_m)
    fail("mobility.lane_spacing_m must lie in (0, area_side_m]");
  if (mobility.speed_kmh < 0.0) fail("mobility.speed_kmh must be >= 0");
  if (mobility.pair_distance_m <= 0.0)
    fail("mobility.pair_distance_m must be > 0");
  if (channel.w_hz <= 0.0) fail("channel.w_hz must be > 0");
  if (channel.alpha <= 0.0) fail("channel.alpha must be > 0");
  if (channel.delta_m <= 0.0) fail("channel.delta_m must be > 0");
  if (!(channel.eps > 0.0) || channel.eps > 0.5)
    fail("channel.eps must lie in (0, 0.5]");
  if (channel.l_blocklength < 0) fail("channel.l_blocklength must be >= 0");
  path_loss_params().validate();
  if (clustering.zeta_m <= 0.0) fail("clustering.zeta_m must be > 0");
  if (clustering.phi_m <= 0.0) fail("clustering.phi_m must be > 0");
  if (clustering.g_groups < 1) fail("clustering.g_groups must be >= 1");
  if (clustering.t0_slots < 1) fail("clustering.t0_slots must be >= 1");
  if (queueing.lambda_avg_bps < 0.0) fail("queueing.lambda_avg_bps must be >= 0");
  if (queueing.m_th_bits <= 0.0) fail("queueing.m_th_bits must be > 0");
  if (queueing.b_th_bits2 <= 0.0) fail("queueing.b_th_bits2 must be > 0");
  if (queueing.delta.has_value() != queueing.kappa_bits.has_value())
    fail("queueing.delta and queueing.kappa_bits must be given together");
  if (queueing.delta) {
    if (*queueing.delta <= 0.0) fail("queueing.delta must be > 0");
    if (*queueing.kappa_bits <= queueing.m_th_bits)
      fail("queueing.kappa_bits must exceed queueing.m_th_bits");
  }
  if (!(evt.psi > 0.0) || evt.psi >= 1.0) fail("evt.psi must lie in (0, 1)");
  if (evt.min_exceedances < 2) fail("evt.min_exceedances must be >= 2");
  if (evt.recompute_period < 1) fail("evt.recompute_period must be >= 1");
  if (power.v < 0.0) fail("power.v must be >= 0");
  if (power.n_rb < 1) fail("power.n_rb must be >= 1");
  if (power.weight_unit_bits <= 0.0) fail("power.weight_unit_bits must be > 0");
  if (baseline.r_c_bps && *baseline.r_c_bps <= 0.0)
    fail("baseline.r_c_bps must be > 0");
  if (baseline.p_busy && !(*baseline.p_busy > 0.0 && *baseline.p_busy <= 1.0))
    fail("baseline.p_busy must lie in (0, 1]");
  for (double v : sweep.v_values)
    if (v < 0.0) fail("sweep.v_values entries must be >= 0");
  for (int k : sweep.k_values)
    if (k < 1) fail("sweep.k_values entries must be >= 1");
  for (std::int64_t l : sweep.l_values)
    if (l < 1) fail("sweep.l_values entries must be >= 1");
  for (double e : sweep.eps_values)
    if (!(e > 0.0) || e > 0.5) fail("sweep.eps_values entries must lie in (0, 0.5]");
  for (double d : sweep.distance_values)
    if (d <= 0.0) fail("sweep.distance_values entries must be > 0");
}

ExperimentConfig parse_config_text(const std::string& text) {
  bool blank = true;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) {
      blank = false;
      break;
    }
  if (blank) {
    ExperimentConfig cfg;
    cfg.validate();
    return cfg;
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: malformed JSON: ") +
                                e.what());
  }
  return from_json(j);
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot read \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["scheme"] = scheme_name(cfg.scheme);
  j["slots"] = cfg.slots;
  j["warmup"] = cfg.warmup;
  j["t_c_s"] = cfg.t_c_s;
  j["out_dir"] = cfg.out_dir;
  j["mobility"] = {{"area_side_m", cfg.mobility.area_side_m},
                   {"lane_spacing_m", cfg.mobility.lane_spacing_m},
                   {"speed_kmh", cfg.mobility.speed_kmh},
                   {"pair_distance_m", cfg.mobility.pair_distance_m},
                   {"k_pairs", cfg.mobility.k_pairs}};
  j["channel"] = {{"l0_db", cfg.channel.l0_db},
                  {"l0p_db", cfg.channel.l0p_db},
                  {"alpha", cfg.channel.alpha},
                  {"delta_m", cfg.channel.delta_m},
                  {"n0_dbm_hz", cfg.channel.n0_dbm_hz},
                  {"w_hz", cfg.channel.w_hz},
                  {"interference_dbm", cfg.channel.interference_dbm},
                  {"eps", cfg.channel.eps},
                  {"l_blocklength", cfg.channel.l_blocklength}};
  j["clustering"] = {{"zeta_m", cfg.clustering.zeta_m},
                     {"phi_m", cfg.clustering.phi_m},
                     {"g_groups", cfg.clustering.g_groups},
                     {"t0_slots", cfg.clustering.t0_slots}};
  j["queueing"] = {{"lambda_avg_bps", cfg.queueing.lambda_avg_bps},
                   {"m_th_bits", cfg.queueing.m_th_bits},
                   {"b_th_bits2", cfg.queueing.b_th_bits2}};
  if (cfg.queueing.delta) j["queueing"]["delta"] = *cfg.queueing.delta;
  if (cfg.queueing.kappa_bits)
    j["queueing"]["kappa_bits"] = *cfg.queueing.kappa_bits;
  j["evt"] = {{"psi", cfg.evt.psi},
              {"min_exceedances", cfg.evt.min_exceedances},
              {"recompute_period", cfg.evt.recompute_period}};
  j["power"] = {{"v", cfg.power.v},
                {"p_max_dbm", cfg.power.p_max_dbm},
                {"n_rb", cfg.power.n_rb},
                {"weight_unit_bits", cfg.power.weight_unit_bits}};
  j["baseline"] = {{"auto_match", cfg.baseline.auto_match}};
  if (cfg.baseline.r_c_bps) j["baseline"]["r_c_bps"] = *cfg.baseline.r_c_bps;
  if (cfg.baseline.p_busy) j["baseline"]["p_busy"] = *cfg.baseline.p_busy;
  json sweep = json::object();
  if (!cfg.sweep.v_values.empty()) sweep["v_values"] = cfg.sweep.v_values;
  if (!cfg.sweep.k_values.empty()) sweep["k_values"] = cfg.sweep.k_values;
  if (!cfg.sweep.l_values.empty()) sweep["l_values"] = cfg.sweep.l_values;
  if (!cfg.sweep.eps_values.empty()) sweep["eps_values"] = cfg.sweep.eps_values;
  if (!cfg.sweep.distance_values.empty())
    sweep["distance_values"] = cfg.sweep.distance_values;
  if (!sweep.empty()) j["sweep"] = sweep;
  return j.dump(2) + "\n";
}

}  // namespace v2x
