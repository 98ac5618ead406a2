#ifndef JSCC_SOURCE_HPP
#define JSCC_SOURCE_HPP

#include <cstddef>
#include <vector>

namespace jscc {

// All rates and exponents in this library are in nats unless a name says
// otherwise (bits appear only at the CLI boundary and in the sphere-packing
// module, whose rate definition is base-2).

// Memoryless source over a finite alphabet. Immutable after construction.
class DiscreteSource {
 public:
  explicit DiscreteSource(std::vector<double> probs);

  // Binary source with P{symbol 1} = p1 (symbol 0 first).
  static DiscreteSource binary(double p1);

  const std::vector<double>& probs() const { return probs_; }
  const std::vector<double>& log_probs() const { return log_probs_; }
  std::size_t alphabet_size() const { return probs_.size(); }
  bool is_binary() const { return probs_.size() == 2; }
  double p1() const;  // binary sources only

 private:
  std::vector<double> probs_;
  std::vector<double> log_probs_;
};

// Source symbols per channel use, t = k/n.
struct SourceChannelRatio {
  double t;
  explicit SourceChannelRatio(double value);
};

// H(V) = -sum p log p, nats/symbol.
double entropy(const DiscreteSource& src);

// Gallager source function Es(rho) = (1+rho) log sum_v p(v)^{1/(1+rho)}.
// Throws std::domain_error for rho < 0.
double gallager_source_fn(const DiscreteSource& src, double rho);

// Es'(rho); equals the entropy of the tilted distribution at
// sigma = 1/(1+rho). Es'(0) = H(V), Es'(inf) = log|V|.
double gallager_source_fn_deriv(const DiscreteSource& src, double rho);

// p_sigma(v) = p(v)^sigma / sum p^sigma, computed in log domain.
DiscreteSource tilted_distribution(const DiscreteSource& src, double sigma);

// Mean of log p(v) under the sigma-tilted distribution. Strictly increasing
// in sigma from (1/|V|) sum log p at sigma->0 to log max p at sigma->inf.
double tilted_logprob_mean(const DiscreteSource& src, double sigma);

// Source reliability function e(R) = sup_{rho>=0} {rho R - Es(rho)}.
// Zero for R <= H(V); D(uniform||P) at R = log|V|; +infinity beyond.
double source_reliability(const DiscreteSource& src, double rate);

// Eq-per-source-bit SNR conversion for binary sources:
// Es/N0 = t * h2(p) * Eb/N0 with Eb/N0 given in dB. Throws for non-binary.
double ebn0_to_esn0(double ebn0_db, const SourceChannelRatio& t,
                    const DiscreteSource& src);

}  // namespace jscc

#endif
