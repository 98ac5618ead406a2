#include "jscc/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace jscc {

using json = nlohmann::ordered_json;

std::vector<double> SnrSweep::points() const {
  if (step_db <= 0.0) throw std::invalid_argument("channel.snr.step_db <= 0");
  if (stop_db < start_db - 1e-12) {
    throw std::invalid_argument("channel.snr.stop_db < start_db");
  }
  std::vector<double> out;
  const int count = static_cast<int>(
      std::floor((stop_db - start_db) / step_db + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) out.push_back(start_db + i * step_db);
  return out;
}

void ExperimentConfig::validate() const {
  if (!(source_p > 0.0 && source_p < 1.0)) {
    throw std::invalid_argument("source.p must be in (0, 1)");
  }
  if (!(t > 0.0)) throw std::invalid_argument("ratio t must be > 0");
  if (k.has_value() != n.has_value()) {
    throw std::invalid_argument("ratio: give both k and n or neither");
  }
  if (k && (*k < 1 || *n < 1)) {
    throw std::invalid_argument("ratio: k and n must be >= 1");
  }
  if (channel.type != "biawgn" && channel.type != "bsc") {
    throw std::invalid_argument("channel.type must be biawgn or bsc");
  }
  if (channel.type == "bsc" &&
      !(channel.bsc_crossover > 0.0 && channel.bsc_crossover < 0.5)) {
    throw std::invalid_argument("channel.crossover must be in (0, 0.5)");
  }
  if (channel.snr_convention != "per_source_bit" &&
      channel.snr_convention != "per_channel_symbol") {
    throw std::invalid_argument("channel.snr_convention unknown");
  }
  channel.snr.points();  // throws on empty/invalid sweep
  if (scheme) {
    if (!scheme->rates.empty() && !scheme->thresholds.empty()) {
      throw std::invalid_argument("scheme: give rates or thresholds, not both");
    }
    for (int nc : scheme->num_classes) {
      if (nc < 1) throw std::invalid_argument("scheme.num_classes must be >= 1");
    }
    if (!scheme->code_files.empty() && !scheme->k_dims.empty()) {
      throw std::invalid_argument("scheme: give code_files or k_dims, not both");
    }
    for (const std::string& f : scheme->code_files) {
      if (!std::filesystem::exists(f)) {
        throw std::invalid_argument("scheme.code_files: missing file " + f);
      }
    }
  }
  if (sim.trials < 1) throw std::invalid_argument("sim.trials must be >= 1");
  if (output.format != "csv" && output.format != "json") {
    throw std::invalid_argument("output.format must be csv or json");
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("source")) cfg.source_p = j["source"].at("p");
    if (j.contains("ratio")) {
      const auto& r = j["ratio"];
      if (r.contains("k") || r.contains("n")) {
        cfg.k = r.at("k").get<int>();
        cfg.n = r.at("n").get<int>();
        cfg.t = static_cast<double>(*cfg.k) / *cfg.n;
      } else {
        cfg.t = r.at("t");
      }
    }
    if (j.contains("channel")) {
      const auto& c = j["channel"];
      cfg.channel.type = c.value("type", "biawgn");
      cfg.channel.bsc_crossover = c.value("crossover", 0.0);
      if (c.contains("snr")) {
        cfg.channel.snr.start_db = c["snr"].at("start_db");
        cfg.channel.snr.stop_db = c["snr"].at("stop_db");
        cfg.channel.snr.step_db = c["snr"].value("step_db", 1.0);
      }
      cfg.channel.snr_convention =
          c.value("snr_convention", "per_source_bit");
    }
    if (j.contains("scheme")) {
      const auto& s = j["scheme"];
      SchemeConfig sc;
      sc.num_classes = s.value("num_classes", std::vector<int>{});
      sc.rates = s.value("rates", std::vector<double>{});
      sc.thresholds = s.value("thresholds", std::vector<double>{});
      sc.code_files = s.value("code_files", std::vector<std::string>{});
      sc.k_dims = s.value("k_dims", std::vector<int>{});
      sc.thm1 = s.value("thm1", false);
      cfg.scheme = std::move(sc);
    }
    if (j.contains("sim")) {
      cfg.sim.trials = j["sim"].value("trials", std::uint64_t{10000});
      cfg.sim.seed = j["sim"].value("seed", std::uint64_t{1});
      cfg.sim.min_errors = j["sim"].value("min_errors", std::uint64_t{0});
    }
    if (j.contains("output")) {
      cfg.output.path = j["output"].value("path", "");
      cfg.output.format = j["output"].value("format", "csv");
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config field error: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json j;
  j["source"] = {{"p", cfg.source_p}};
  if (cfg.k) {
    j["ratio"] = {{"k", *cfg.k}, {"n", *cfg.n}};
  } else {
    j["ratio"] = {{"t", cfg.t}};
  }
  j["channel"] = {{"type", cfg.channel.type}};
  if (cfg.channel.type == "bsc") {
    j["channel"]["crossover"] = cfg.channel.bsc_crossover;
  }
  j["channel"]["snr"] = {{"start_db", cfg.channel.snr.start_db},
                         {"stop_db", cfg.channel.snr.stop_db},
                         {"step_db", cfg.channel.snr.step_db}};
  j["channel"]["snr_convention"] = cfg.channel.snr_convention;
  if (cfg.scheme) {
    json s;
    if (!cfg.scheme->num_classes.empty()) {
      s["num_classes"] = cfg.scheme->num_classes;
    }
    if (!cfg.scheme->rates.empty()) s["rates"] = cfg.scheme->rates;
    if (!cfg.scheme->thresholds.empty()) {
      s["thresholds"] = cfg.scheme->thresholds;
    }
    if (!cfg.scheme->code_files.empty()) {
      s["code_files"] = cfg.scheme->code_files;
    }
    if (!cfg.scheme->k_dims.empty()) s["k_dims"] = cfg.scheme->k_dims;
    s["thm1"] = cfg.scheme->thm1;
    j["scheme"] = std::move(s);
  }
  j["sim"] = {{"trials", cfg.sim.trials},
              {"seed", cfg.sim.seed},
              {"min_errors", cfg.sim.min_errors}};
  j["output"] = {{"path", cfg.output.path}, {"format", cfg.output.format}};
  return j.dump(2) + "\n";
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write: " + tmp.string());
    out << content;
    if (!out.flush()) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, target);
}

}  // namespace jscc
