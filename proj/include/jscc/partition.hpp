#ifndef JSCC_PARTITION_HPP
#define JSCC_PARTITION_HPP

#include <limits>
#include <vector>

#include "jscc/source.hpp"

namespace jscc {

// Class machinery for probability-threshold partitions of the source
// message set. Class indexing follows the threshold ordering: class 0 is
// the declared-error class (least probable messages), class N the most
// probable. Thresholds are stored per symbol, g_i = (1/k) log gamma_i^k,
// strictly increasing, with implied g_0 = -inf and g_{N+1} = 0.
//
// Only the rho >= 0 branch of the threshold <-> tilt correspondence is
// modeled; thresholds are restricted to the band
//   (1/|V|) sum log p(v)  <=  g  <=  sum p(v) log p(v).

inline constexpr double kRhoStarInf = std::numeric_limits<double>::infinity();

// Boundary tilt parameter rho* for a per-symbol threshold g, solving
//   sum_v p_{1/(1+rho*)}(v) log p(v) = g.
// Below-band g maps to the +inf sentinel, above-band g to 0.
double rho_star_from_threshold(const DiscreteSource& src, double g);

// R = t * Es'(rho*); increasing in rho*, in [t H(V), t log|V|].
double rate_from_rho_star(const DiscreteSource& src,
                          const SourceChannelRatio& t, double rho_star);

// Inverse of the composition g -> rho* -> R. Throws for out-of-range R.
double threshold_from_rate(const DiscreteSource& src,
                           const SourceChannelRatio& t, double rate);

class PartitionSpec {
 public:
  static PartitionSpec from_thresholds(const DiscreteSource& src,
                                       const SourceChannelRatio& t,
                                       std::vector<double> g);
  // rates must be strictly decreasing: R_1 > ... > R_N.
  static PartitionSpec from_rates(const DiscreteSource& src,
                                  const SourceChannelRatio& t,
                                  std::vector<double> rates);

  int num_classes() const { return static_cast<int>(g_.size()); }  // N
  const std::vector<double>& thresholds() const { return g_; }      // g_1..g_N
  const std::vector<double>& rates() const { return rates_; }       // R_1..R_N
  // rho*_i for i = 0..N+1 (rho*_0 = inf sentinel, rho*_{N+1} = 0).
  double rho_star(int i) const;
  double t() const { return t_; }

 private:
  PartitionSpec() = default;
  std::vector<double> g_;
  std::vector<double> rates_;
  std::vector<double> rho_star_;  // rho*_1..rho*_N
  double t_ = 1.0;
};

// Piecewise class source function Es_i(rho): equals Es(rho) on
// [rho*_{i+1}, rho*_i], tangent-line extension outside. Returns -inf for
// an empty class.
double class_source_fn(const DiscreteSource& src, const PartitionSpec& part,
                       int class_index, double rho);

struct ClassProbExponent {
  double per_symbol;       // lim (1/k) log Pr{A_i} = -e(R_{i+1}/t)
  double per_channel_use;  // t times the above
};

ClassProbExponent class_prob_exponent(const DiscreteSource& src,
                                      const SourceChannelRatio& t,
                                      const PartitionSpec& part,
                                      int class_index);

struct ClassInfo {
  int index;
  double rate;          // nats/channel use (class 0: t log|V| asymptote)
  double rho_star_lo;   // rho*_{i+1}
  double rho_star_hi;   // rho*_i
  int w_lo;             // Hamming-weight range for finite-k BMS classes;
  int w_hi;             // empty class has w_lo > w_hi
};

// Concrete finite-k realization for a binary source with p <= 1/2: since
// sequence probability is decreasing in Hamming weight, every class is a
// contiguous weight interval. Boundary convention is strict lower /
// inclusive upper on probability.
std::vector<ClassInfo> realize_partition_bms(const DiscreteSource& src, int k,
                                             const PartitionSpec& part);

}  // namespace jscc

#endif
