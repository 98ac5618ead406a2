#include "jscc/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace jscc {

namespace {

constexpr int kMaxK = 62;      // source mask width
constexpr int kMaxDim = 22;    // exhaustive-ML feasibility cap
constexpr double kTwoPi = 6.28318530717958647692;

// C(m, r) table for all m <= k; fits uint64 up to k = 62
struct BinomialTable {
  std::vector<std::vector<std::uint64_t>> c;
  explicit BinomialTable(int k) : c(k + 1) {
    for (int m = 0; m <= k; ++m) {
      c[m].assign(m + 1, 1);
      for (int r = 1; r < m; ++r) c[m][r] = c[m - 1][r - 1] + c[m - 1][r];
    }
  }
  std::uint64_t operator()(int m, int r) const {
    if (r < 0 || r > m) return 0;
    return c[m][r];
  }
};

const BinomialTable& binomials() {
  static const BinomialTable table(kMaxK);
  return table;
}

void check_k(int k) {
  if (k < 1 || k > kMaxK) {
    throw std::invalid_argument("source length k out of [1, 62]");
  }
}

double log_prior(const CodecConfig& cfg, std::uint64_t v) {
  const int w = std::popcount(v);
  return w * cfg.src.log_probs()[1] + (cfg.k - w) * cfg.src.log_probs()[0];
}

}  // namespace

std::uint64_t enumerative_index(std::uint64_t v, int k) {
  check_k(k);
  if (k < 64 && (v >> k) != 0) {
    throw std::invalid_argument("enumerative_index: mask wider than k");
  }
  const auto& c = binomials();
  const int w = std::popcount(v);
  std::uint64_t base = 0;
  for (int wp = 0; wp < w; ++wp) base += c(k, wp);
  std::uint64_t rank = 0;
  int r = w;  // ones not yet consumed (including the current position)
  for (int j = 1; j <= k && r > 0; ++j) {
    if ((v >> (k - j)) & 1ULL) {
      rank += c(k - j, r);
      --r;
    }
  }
  return base + rank;
}

std::uint64_t enumerative_invert(std::uint64_t index, int k) {
  check_k(k);
  if (k < 64 && index >> k) {
    throw std::out_of_range("enumerative_invert: index >= 2^k");
  }
  const auto& c = binomials();
  int w = 0;
  std::uint64_t rank = index;
  while (rank >= c(k, w)) {
    rank -= c(k, w);
    ++w;
  }
  std::uint64_t v = 0;
  int r = w;
  for (int j = 1; j <= k && r > 0; ++j) {
    const std::uint64_t block = c(k - j, r);  // sequences with a 0 here
    if (rank >= block) {
      rank -= block;
      v |= 1ULL << (k - j);
      --r;
    }
  }
  return v;
}

int codeword_length(std::uint64_t v, int k) {
  return std::bit_width(enumerative_index(v, k));
}

std::uint64_t LinearCode::encode_bits(std::uint64_t info) const {
  std::uint64_t cw = 0;
  for (int t = 0; t < k_dim; ++t) {
    if ((info >> t) & 1ULL) cw ^= rows[t];
  }
  return cw;
}

bool LinearCode::full_rank() const {
  std::vector<std::uint64_t> m = rows;
  int rank = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) return false;
    const std::uint64_t pivot = m[i] & (~m[i] + 1);  // lowest set bit
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j != i && (m[j] & pivot)) m[j] ^= m[i];
    }
    ++rank;
  }
  return rank == static_cast<int>(rows.size());
}

LinearCode LinearCode::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open code file: " + path);
  LinearCode code;
  if (!(in >> code.n >> code.k_dim)) {
    throw std::runtime_error("bad code header in " + path);
  }
  if (code.n < 1 || code.n > kMaxK || code.k_dim < 1 || code.k_dim > code.n) {
    throw std::runtime_error("bad code dimensions in " + path);
  }
  code.rows.assign(code.k_dim, 0);
  for (int t = 0; t < code.k_dim; ++t) {
    for (int j = 0; j < code.n; ++j) {
      int bit;
      if (!(in >> bit) || (bit != 0 && bit != 1)) {
        throw std::runtime_error("bad generator bit in " + path);
      }
      if (bit) code.rows[t] |= 1ULL << j;
    }
  }
  if (!code.full_rank()) {
    throw std::runtime_error("generator not full rank in " + path);
  }
  return code;
}

void LinearCode::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write code file: " + path);
  out << n << ' ' << k_dim << '\n';
  for (int t = 0; t < k_dim; ++t) {
    for (int j = 0; j < n; ++j) {
      out << ((rows[t] >> j) & 1ULL) << (j + 1 < n ? ' ' : '\n');
    }
  }
}

LinearCode LinearCode::random_full_rank(int n, int k_dim, std::uint64_t seed) {
  if (n < 1 || n > kMaxK || k_dim < 1 || k_dim > n) {
    throw std::invalid_argument("random_full_rank: bad dimensions");
  }
  SplitMix64 rng(seed, 0xC0DEULL);
  const std::uint64_t mask =
      n == 64 ? ~0ULL : ((1ULL << n) - 1);
  LinearCode code;
  code.n = n;
  code.k_dim = k_dim;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    code.rows.clear();
    for (int t = 0; t < k_dim; ++t) code.rows.push_back(rng.next() & mask);
    if (code.full_rank()) return code;
  }
  throw std::runtime_error("random_full_rank: no full-rank draw in 1000 tries");
}

void CodecConfig::validate() const {
  if (!src.is_binary()) throw std::invalid_argument("codec: binary source only");
  check_k(k);
  if (n < 1 || n > kMaxK) throw std::invalid_argument("codec: n out of range");
  if (codes.empty()) throw std::invalid_argument("codec: need >= 1 code");
  int prev = 0;
  for (const auto& c : codes) {
    if (c.n != n) throw std::invalid_argument("codec: code block length mismatch");
    if (static_cast<int>(c.rows.size()) != c.k_dim) {
      throw std::invalid_argument("codec: generator row count != k_dim");
    }
    if (c.k_dim <= prev) {
      throw std::invalid_argument("codec: k_dim must be strictly increasing");
    }
    if (c.k_dim > kMaxDim) {
      throw std::invalid_argument("codec: k_dim exceeds exhaustive-ML cap 22");
    }
    if (!c.full_rank()) throw std::invalid_argument("codec: rank-deficient code");
    prev = c.k_dim;
  }
  if (es_n0 <= 0.0) throw std::invalid_argument("codec: es_n0 must be > 0");
}

int assign_class(const CodecConfig& cfg, std::uint64_t v) {
  const int len = codeword_length(v, cfg.k);
  for (std::size_t i = 0; i < cfg.codes.size(); ++i) {
    if (len <= cfg.codes[i].k_dim) return static_cast<int>(i) + 1;
  }
  return 0;
}

std::vector<double> encode(const CodecConfig& cfg, std::uint64_t v) {
  const int cls = assign_class(cfg, v);
  const std::uint64_t info = cls == 0 ? 0 : enumerative_index(v, cfg.k);
  const LinearCode& code = cfg.codes[cls == 0 ? 0 : cls - 1];
  const std::uint64_t cw = code.encode_bits(info);
  std::vector<double> x(cfg.n);
  for (int j = 0; j < cfg.n; ++j) {
    x[j] = ((cw >> j) & 1ULL) ? -1.0 : 1.0;
  }
  return x;
}

std::vector<BankEntry> ml_decode_bank(const CodecConfig& cfg,
                                      const std::vector<double>& y) {
  if (static_cast<int>(y.size()) != cfg.n) {
    throw std::invalid_argument("ml_decode_bank: observation length != n");
  }
  const std::uint64_t source_count =
      cfg.k == 64 ? ~0ULL : (1ULL << cfg.k);  // indices are < 2^k
  double y_energy = 0.0;
  for (double yi : y) y_energy += yi * yi;
  const double sigma2 = 1.0 / (2.0 * cfg.es_n0);
  const double log_norm = -0.5 * cfg.n * std::log(kTwoPi * sigma2);

  std::vector<BankEntry> bank(cfg.codes.size());
  for (std::size_t i = 0; i < cfg.codes.size(); ++i) {
    const LinearCode& code = cfg.codes[i];
    std::uint64_t lo = 0;
    if (cfg.exploit_zero_padding && i > 0) {
      lo = 1ULL << cfg.codes[i - 1].k_dim;
    }
    std::uint64_t hi = (1ULL << code.k_dim) - 1;
    if (hi >= source_count) hi = source_count - 1;

    bool found = false;
    std::uint64_t best_info = 0;
    double best_corr = -std::numeric_limits<double>::infinity();
    for (std::uint64_t m = lo; m <= hi; ++m) {
      const std::uint64_t cw = code.encode_bits(m);
      double corr = 0.0;
      for (int j = 0; j < cfg.n; ++j) {
        corr += ((cw >> j) & 1ULL) ? -y[j] : y[j];
      }
      if (!found || corr > best_corr) {  // ties keep the lowest index
        found = true;
        best_corr = corr;
        best_info = m;
      }
    }
    if (found) {
      // ||y - x||^2 = ||y||^2 - 2 <y, x> + n for unit-energy symbols
      const double dist2 = y_energy - 2.0 * best_corr + cfg.n;
      bank[i].ok = true;
      bank[i].info = best_info;
      bank[i].v = enumerative_invert(best_info, cfg.k);
      bank[i].metric = -dist2 / (2.0 * sigma2) + log_norm;
    }
  }
  return bank;
}

MapDecision map_select(const CodecConfig& cfg,
                       const std::vector<BankEntry>& bank) {
  MapDecision best{0, 0};
  double best_q = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < bank.size(); ++i) {
    if (!bank[i].ok) continue;
    const double q = log_prior(cfg, bank[i].v) + bank[i].metric;
    if (q > best_q) {  // ties keep the lowest class
      best_q = q;
      best = {bank[i].v, static_cast<int>(i) + 1};
    }
  }
  if (best.class_index == 0) return {0, 1};  // all failed: all-zero fallback
  return best;
}

std::uint64_t draw_source_sequence(const DiscreteSource& src, int k,
                                   SplitMix64& rng) {
  const double p1 = src.probs()[1];
  std::uint64_t v = 0;
  for (int j = 1; j <= k; ++j) {
    if (rng.uniform() < p1) v |= 1ULL << (k - j);
  }
  return v;
}

SimResult simulate_fer_point(const CodecConfig& cfg, std::uint64_t max_trials,
                             std::uint64_t seed, std::uint64_t min_errors) {
  cfg.validate();
  if (max_trials < 1) throw std::invalid_argument("simulate: trials >= 1");
  const double sigma = std::sqrt(1.0 / (2.0 * cfg.es_n0));

  SimResult res;
  res.es_n0 = cfg.es_n0;
  res.seed = seed;
  std::vector<double> y(cfg.n);
  std::uint64_t t = 0;
  for (; t < max_trials; ++t) {
    SplitMix64 rng(seed, t);
    const std::uint64_t v = draw_source_sequence(cfg.src, cfg.k, rng);
    const int cls = assign_class(cfg, v);
    if (cls == 0) {
      ++res.e_s;
    } else {
      const std::vector<double> x = encode(cfg, v);
      for (int j = 0; j < cfg.n; ++j) y[j] = x[j] + sigma * rng.gaussian();
      const std::vector<BankEntry> bank = ml_decode_bank(cfg, y);
      const BankEntry& own = bank[cls - 1];
      if (!own.ok || own.v != v) {
        ++res.e_ml;
      } else {
        const MapDecision d = map_select(cfg, bank);
        if (d.class_index != cls) ++res.e_map;
      }
    }
    res.errors_total = res.e_s + res.e_ml + res.e_map;
    if (min_errors > 0 && res.errors_total >= min_errors) {
      ++t;
      break;
    }
  }
  res.trials = t;
  res.errors_total = res.e_s + res.e_ml + res.e_map;
  res.insufficient_errors = min_errors > 0 && res.errors_total < min_errors;
  res.fer = static_cast<double>(res.errors_total) / res.trials;
  res.fer_ci95 = wilson_interval(res.errors_total, res.trials);
  return res;
}

std::vector<SimResult> simulate_fer(CodecConfig cfg,
                                    const std::vector<double>& es_n0_list,
                                    std::uint64_t max_trials,
                                    std::uint64_t seed,
                                    std::uint64_t min_errors) {
  std::vector<SimResult> out;
  out.reserve(es_n0_list.size());
  for (std::size_t i = 0; i < es_n0_list.size(); ++i) {
    // independent substream per sweep point: rows do not depend on order
    const std::uint64_t point_seed = SplitMix64(seed, 0x5EEDULL + i).next();
    cfg.es_n0 = es_n0_list[i];
    out.push_back(simulate_fer_point(cfg, max_trials, point_seed, min_errors));
  }
  return out;
}

}  // namespace jscc
