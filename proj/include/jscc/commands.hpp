#ifndef JSCC_COMMANDS_HPP
#define JSCC_COMMANDS_HPP

#include <string>

#include "jscc/config.hpp"

namespace jscc {

// Subcommand drivers. Each returns the complete output document (CSV or
// JSON per config.output.format where applicable); the caller decides
// whether it goes to a file (atomically) or stdout. All outputs are
// deterministic for a fixed config, independent of the thread count.

// separate / joint / hull exponents plus the multi-class bounds per
// requested N, one row per sweep point
std::string cmd_exponents(const ExperimentConfig& cfg, int threads = 1);

// optimal (R, R') pairs of the relaxed multi-class bound, bits and nats
std::string cmd_rates(const ExperimentConfig& cfg, int threads = 1);

// Monte-Carlo FER sweep of the concrete codec
std::string cmd_simulate(const ExperimentConfig& cfg);

// two-class converse bound sweep; join_csv, when given, must be the output
// of cmd_simulate for the same config and produces the bound-vs-FER
// comparison columns
std::string cmd_bound(const ExperimentConfig& cfg, int threads = 1,
                      const std::string& join_csv = "");

}  // namespace jscc

#endif
