#include "eclink/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "json.hpp"

namespace eclink {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw config_error(path + ": " + msg);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "must be a JSON object");
  return j;
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known) fail(join(path, item.key()), "unknown key");
  }
}

double get_number(const json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(join(path, key), "missing required number");
  if (!it->is_number()) fail(join(path, key), "must be a number");
  return it->get<double>();
}

double get_number_or(const json& obj, const std::string& path, const char* key,
                     double fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) fail(join(path, key), "must be a number");
  return it->get<double>();
}

std::uint64_t get_count_or(const json& obj, const std::string& path, const char* key,
                           std::uint64_t fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0)
    fail(join(path, key), "must be a nonnegative integer");
  return it->get<std::uint64_t>();
}

bool get_bool_or(const json& obj, const std::string& path, const char* key,
                 bool fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) fail(join(path, key), "must be true or false");
  return it->get<bool>();
}

SourceModel parse_source(const json& j, const std::string& path) {
  require_object(j, path);
  const auto kind_it = j.find("kind");
  if (kind_it == j.end() || !kind_it->is_string())
    fail(join(path, "kind"), "missing source kind (\"dtms\", \"fms\", or \"mmps\")");
  const std::string kind = kind_it->get<std::string>();
  try {
    if (kind == "dtms") {
      reject_unknown(j, path, {"kind", "p11", "p22", "lambda_on"});
      return DtmsSource(get_number(j, path, "p11"), get_number(j, path, "p22"),
                        get_number(j, path, "lambda_on"));
    }
    if (kind == "fms") {
      reject_unknown(j, path, {"kind", "alpha", "beta", "lambda_on"});
      return FmsSource(get_number(j, path, "alpha"), get_number(j, path, "beta"),
                       get_number(j, path, "lambda_on"));
    }
    if (kind == "mmps") {
      reject_unknown(j, path, {"kind", "alpha", "beta", "lambda_on"});
      return MmpsSource(get_number(j, path, "alpha"), get_number(j, path, "beta"),
                        get_number(j, path, "lambda_on"));
    }
  } catch (const domain_error& e) {
    fail(path, e.what());
  }
  fail(join(path, "kind"), "unknown source kind \"" + kind +
                               "\" (expected \"dtms\", \"fms\", or \"mmps\")");
}

void parse_delay(const json& j, const std::string& path, DelayConfig* out) {
  require_object(j, path);
  reject_unknown(j, path, {"d", "zeta"});
  if (const auto it = j.find("d"); it != j.end()) {
    if (it->is_number()) {
      out->thresholds = {it->get<double>()};
    } else if (it->is_array()) {
      for (const auto& v : *it) {
        if (!v.is_number()) fail(join(path, "d"), "array entries must be numbers");
        out->thresholds.push_back(v.get<double>());
      }
    } else {
      fail(join(path, "d"), "must be a number or an array of numbers");
    }
    for (double d : out->thresholds)
      if (!(d >= 0.0) || !std::isfinite(d))
        fail(join(path, "d"), "delay thresholds must be nonnegative and finite");
  }
  if (const auto it = j.find("zeta"); it != j.end()) {
    if (it->is_string()) {
      if (it->get<std::string>() != "simulate")
        fail(join(path, "zeta"), "must be a number in (0,1] or the string \"simulate\"");
      out->zeta_from_sim = true;
    } else if (it->is_number()) {
      out->zeta = it->get<double>();
      if (!(out->zeta > 0.0 && out->zeta <= 1.0))
        fail(join(path, "zeta"), "must be in (0, 1]");
    } else {
      fail(join(path, "zeta"), "must be a number in (0,1] or the string \"simulate\"");
    }
  }
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config: invalid JSON: ") + e.what());
  }
  require_object(root, "config");
  reject_unknown(root, "", {"source", "channel", "qos", "delay", "sweep", "sim"});

  RunConfig cfg;

  const auto src_it = root.find("source");
  if (src_it == root.end()) fail("source", "missing required section");
  cfg.source = parse_source(*src_it, "source");

  const auto ch_it = root.find("channel");
  if (ch_it == root.end()) fail("channel", "missing required section");
  {
    const json& ch = require_object(*ch_it, "channel");
    reject_unknown(ch, "channel", {"snr_db", "rate"});
    const double snr_db = get_number(ch, "channel", "snr_db");
    cfg.snr = from_db(snr_db);
    if (!(cfg.snr > 0.0) || !std::isfinite(cfg.snr))
      fail("channel.snr_db", "must give a positive finite linear SNR");
    if (const auto it = ch.find("rate"); it != ch.end()) {
      if (!it->is_number()) fail("channel.rate", "must be a number");
      cfg.rate = it->get<double>();
      if (!(*cfg.rate >= 0.0) || !std::isfinite(*cfg.rate))
        fail("channel.rate", "must be nonnegative and finite");
    }
  }

  if (const auto it = root.find("qos"); it != root.end()) {
    const json& q = require_object(*it, "qos");
    reject_unknown(q, "qos", {"theta"});
    cfg.theta = get_number_or(q, "qos", "theta", cfg.theta);
    if (!(cfg.theta > 0.0) || !std::isfinite(cfg.theta))
      fail("qos.theta", "must be positive and finite");
  }

  if (const auto it = root.find("delay"); it != root.end())
    parse_delay(*it, "delay", &cfg.delay);

  if (const auto it = root.find("sweep"); it != root.end()) {
    const json& s = require_object(*it, "sweep");
    reject_unknown(s, "sweep", {"points", "delay_threshold"});
    cfg.sweep.points = static_cast<int>(get_count_or(s, "sweep", "points", 0));
    cfg.sweep.delay_threshold =
        get_number_or(s, "sweep", "delay_threshold", cfg.sweep.delay_threshold);
    if (!(cfg.sweep.delay_threshold >= 0.0))
      fail("sweep.delay_threshold", "must be nonnegative");
  }

  if (const auto it = root.find("sim"); it != root.end()) {
    const json& s = require_object(*it, "sim");
    reject_unknown(s, "sim",
                   {"blocks", "warmup", "replications", "horizon", "seed",
                    "mc_theta", "tail_blocks", "tail_d_min", "tail_d_max",
                    "store_sequences"});
    cfg.sim.blocks = get_count_or(s, "sim", "blocks", cfg.sim.blocks);
    cfg.sim.warmup = get_count_or(s, "sim", "warmup", cfg.sim.warmup);
    cfg.sim.replications = get_count_or(s, "sim", "replications", cfg.sim.replications);
    cfg.sim.horizon = get_count_or(s, "sim", "horizon", cfg.sim.horizon);
    cfg.sim.seed = get_count_or(s, "sim", "seed", cfg.sim.seed);
    cfg.sim.mc_theta = get_number_or(s, "sim", "mc_theta", cfg.sim.mc_theta);
    if (!(cfg.sim.mc_theta > 0.0) || !std::isfinite(cfg.sim.mc_theta))
      fail("sim.mc_theta", "must be positive and finite");
    cfg.sim.tail_blocks = get_count_or(s, "sim", "tail_blocks", cfg.sim.tail_blocks);
    cfg.sim.tail_d_min = get_number_or(s, "sim", "tail_d_min", cfg.sim.tail_d_min);
    cfg.sim.tail_d_max = get_number_or(s, "sim", "tail_d_max", cfg.sim.tail_d_max);
    cfg.sim.store_sequences =
        get_bool_or(s, "sim", "store_sequences", cfg.sim.store_sequences);
    if (cfg.sim.blocks == 0) fail("sim.blocks", "must be positive");
    if (cfg.sim.warmup >= cfg.sim.blocks)
      fail("sim.warmup", "must be smaller than sim.blocks");
    if (cfg.sim.replications == 0) fail("sim.replications", "must be positive");
    if (cfg.sim.horizon == 0) fail("sim.horizon", "must be positive");
    if (!(cfg.sim.tail_d_min >= 0.0) || !(cfg.sim.tail_d_max > cfg.sim.tail_d_min))
      fail("sim.tail_d_max", "need 0 <= tail_d_min < tail_d_max");
  }

  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace eclink
