#ifndef JSCC_CONFIG_HPP
#define JSCC_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace jscc {

// Experiment description shared by all subcommands. JSON on disk; parse ->
// serialize -> parse is the identity on the populated fields.

struct SnrSweep {
  double start_db = 0.0;
  double stop_db = 0.0;
  double step_db = 1.0;

  std::vector<double> points() const;  // inclusive, validated nonempty
};

struct ChannelConfig {
  std::string type = "biawgn";  // biawgn | bsc
  double bsc_crossover = 0.0;   // bsc only
  SnrSweep snr;
  // per_source_bit applies the Es/N0 = t h2(p) Eb/N0 conversion;
  // per_channel_symbol treats the sweep values as Es/N0 directly
  std::string snr_convention = "per_source_bit";
};

struct SchemeConfig {
  std::vector<int> num_classes;      // N values for the exponent bounds
  std::vector<double> rates;         // nats/channel use, decreasing
  std::vector<double> thresholds;    // per-symbol log-probability thresholds
  std::vector<std::string> code_files;  // generator matrices for simulation
  std::vector<int> k_dims;           // alternative: random codes per seed
  bool thm1 = false;                 // also run the exact multi-class search
};

struct SimConfig {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  std::uint64_t min_errors = 0;  // > 0 enables the adaptive stop rule
};

struct OutputConfig {
  std::string path;
  std::string format = "csv";  // csv | json
};

struct ExperimentConfig {
  double source_p = 0.1;
  double t = 1.0;  // source symbols per channel use
  std::optional<int> k;
  std::optional<int> n;
  ChannelConfig channel;
  std::optional<SchemeConfig> scheme;
  SimConfig sim;
  OutputConfig output;

  void validate() const;  // throws std::invalid_argument with field names
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

// write-to-temp plus atomic rename; no partial files on error
void atomic_write(const std::string& path, const std::string& content);

}  // namespace jscc

#endif
