#ifndef JSCC_CHANNEL_HPP
#define JSCC_CHANNEL_HPP

#include <functional>
#include <vector>

namespace jscc {

struct InputDistribution {
  std::vector<double> probs;

  explicit InputDistribution(std::vector<double> p);
  static InputDistribution uniform(std::size_t n);
};

// Either a discrete memoryless channel (row-stochastic transition matrix)
// or a binary-input AWGN channel with antipodal inputs +-sqrt(Es), Es = 1,
// and noise variance N0/2 = 1/(2 Es/N0) per dimension.
class ChannelSpec {
 public:
  enum class Kind { Dmc, BiAwgn };

  static ChannelSpec dmc(std::vector<std::vector<double>> transition);
  static ChannelSpec bsc(double crossover);
  static ChannelSpec bi_awgn(double es_n0);

  Kind kind() const { return kind_; }
  const std::vector<std::vector<double>>& transition() const;
  double es_n0() const;
  std::size_t input_count() const;

  // True for binary-input symmetric channels (BiAwgn, or a 2-input DMC
  // whose second row is a permutation of the first); uniform input
  // maximizes E0 there.
  bool is_symmetric_binary() const;

 private:
  ChannelSpec() = default;
  Kind kind_ = Kind::BiAwgn;
  std::vector<std::vector<double>> transition_;
  double es_n0_ = 0.0;
};

// Gallager channel function
//   E0(rho, Q) = -log sum_y ( sum_x Q(x) W(y|x)^{1/(1+rho)} )^{1+rho}.
// For BiAwgn the output integral uses Gauss-Hermite quadrature with node
// doubling (64..4096) until successive values agree within 1e-10; throws
// on non-convergence. rho in [0, 10]; the bound evaluators clamp to [0, 1].
double e0(const ChannelSpec& ch, const InputDistribution& q, double rho);

// I(Q) in nats/channel use.
double mutual_information(const ChannelSpec& ch, const InputDistribution& q);

// Er(R, Q) = max_{rho in [0,1]} {E0(rho, Q) - rho R}, golden-section.
double random_coding_exponent(const ChannelSpec& ch, const InputDistribution& q,
                              double rate);

// E0(rho) = max_Q E0(rho, Q). Uniform shortcut for symmetric binary
// channels; projected-gradient ascent over the simplex otherwise.
double e0_max(const ChannelSpec& ch, double rho);

// Er(R) = max_{rho in [0,1]} {e0_max(rho) - rho R}.
double random_coding_exponent_max(const ChannelSpec& ch, double rate);

// Upper concave envelope of samples (x must be increasing). Returns the
// envelope values at the same abscissae. Exposed so the hull routine can be
// exercised on synthetic non-concave data.
std::vector<double> upper_concave_envelope(const std::vector<double>& x,
                                           const std::vector<double>& y);

// Concave hull of e0_max on a 2001-point grid over [0,1], linear interp.
double e0_concave_hull(const ChannelSpec& ch, double rho);

// Dense cache of e0_max over [0,1] for optimizer-grade evaluation speed
// (cubic interpolation on a uniform grid, abs error well below 1e-10).
class E0Table {
 public:
  explicit E0Table(const ChannelSpec& ch, int points = 4097);
  explicit E0Table(const std::function<double(double)>& e0_fn,
                   int points = 4097);
  double operator()(double rho) const;

 private:
  std::vector<double> values_;
  double step_;
};

// Concave hull of an arbitrary E0-like function sampled on [0,1].
class ConcaveHullTable {
 public:
  explicit ConcaveHullTable(const ChannelSpec& ch, int points = 2001);
  explicit ConcaveHullTable(const std::function<double(double)>& e0_fn,
                            int points = 2001);
  double operator()(double rho) const;

 private:
  std::vector<double> hull_;
  double step_;
};

}  // namespace jscc

#endif
