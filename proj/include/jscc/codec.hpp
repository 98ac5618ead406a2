#ifndef JSCC_CODEC_HPP
#define JSCC_CODEC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "jscc/numerics.hpp"
#include "jscc/source.hpp"

namespace jscc {

// Desk-scale multi-class source-channel codec: enumerative source coding,
// class assignment by codeword length, a bank of exhaustive soft-ML
// decoders (one per class), and a MAP class selector, simulated over the
// binary-input AWGN channel with antipodal +-1 modulation (Es = 1).
//
// Source sequences are uint64 bit masks; symbol 1 of the sequence is the
// most significant of the k used bits. Ordering is weight-major, then
// lexicographic (MSB-first) within a weight.

// Enumerative index: bijection {0,1}^k -> {0, ..., 2^k - 1}, strictly
// increasing in Hamming weight. Codeword length L(v) = ceil(log2(I+1)),
// L(all-zero) = 0.
std::uint64_t enumerative_index(std::uint64_t v, int k);
std::uint64_t enumerative_invert(std::uint64_t index, int k);
int codeword_length(std::uint64_t v, int k);

struct LinearCode {
  int n = 0;
  int k_dim = 0;
  std::vector<std::uint64_t> rows;  // generator rows; codeword bit j = bit j

  // info bit t selects row t; codeword = XOR of selected rows
  std::uint64_t encode_bits(std::uint64_t info) const;
  bool full_rank() const;

  static LinearCode load(const std::string& path);
  void save(const std::string& path) const;
  static LinearCode random_full_rank(int n, int k_dim, std::uint64_t seed);
};

struct CodecConfig {
  DiscreteSource src;             // binary
  int k = 0;                      // source length
  int n = 0;                      // channel block length
  std::vector<LinearCode> codes;  // class 1..N, k_dim strictly increasing
  double es_n0 = 1.0;
  // decoder knows leftover info bits are zero and restricts each class's
  // candidate set to canonical in-class indices; false decodes over all
  // info words of the class's code
  bool exploit_zero_padding = true;

  void validate() const;  // throws std::invalid_argument
};

// smallest class i with L(v) <= k_dim_i; 0 (overflow) if none
int assign_class(const CodecConfig& cfg, std::uint64_t v);

// antipodal channel input; class 0 maps to the fixed all-zero-information
// codeword of code 1
std::vector<double> encode(const CodecConfig& cfg, std::uint64_t v);

struct BankEntry {
  bool ok = false;         // feasible candidate found
  std::uint64_t info = 0;  // winning information word
  std::uint64_t v = 0;     // corresponding source sequence
  double metric = 0.0;     // log-likelihood log p(y | x(v))
};

// per-class exhaustive ML over the class's feasible information words;
// ties broken toward the lowest message index
std::vector<BankEntry> ml_decode_bank(const CodecConfig& cfg,
                                      const std::vector<double>& y);

struct MapDecision {
  std::uint64_t v = 0;
  int class_index = 0;  // 1-based; ties toward the lowest class
};

// argmax over non-failed classes of log P_V(v_i) + metric_i; all classes
// failed falls back to the all-zero message (class 1)
MapDecision map_select(const CodecConfig& cfg,
                       const std::vector<BankEntry>& bank);

struct SimResult {
  double es_n0 = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t errors_total = 0;
  std::uint64_t e_s = 0;    // source overflow (class 0)
  std::uint64_t e_ml = 0;   // own-class ML decoder wrong
  std::uint64_t e_map = 0;  // class selector wrong
  double fer = 0.0;
  WilsonInterval fer_ci95{0.0, 0.0};
  std::uint64_t seed = 0;
  bool insufficient_errors = false;  // adaptive stop hit the trial cap
};

// One Monte-Carlo point. Trials use substream (seed, trial_index); the
// result is bit-identical for a given seed regardless of scheduling.
// min_errors > 0 enables the adaptive stop: run until that many errors,
// capped at max_trials.
SimResult simulate_fer_point(const CodecConfig& cfg, std::uint64_t max_trials,
                             std::uint64_t seed, std::uint64_t min_errors = 0);

std::vector<SimResult> simulate_fer(CodecConfig cfg,
                                    const std::vector<double>& es_n0_list,
                                    std::uint64_t max_trials,
                                    std::uint64_t seed,
                                    std::uint64_t min_errors = 0);

// deterministic source sequence for trial substreams; exposed so oracle
// pipelines can replay the exact trial stream
std::uint64_t draw_source_sequence(const DiscreteSource& src, int k,
                                   SplitMix64& rng);

}  // namespace jscc

#endif
