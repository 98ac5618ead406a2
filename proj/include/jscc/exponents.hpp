#ifndef JSCC_EXPONENTS_HPP
#define JSCC_EXPONENTS_HPP

#include <vector>

#include "jscc/channel.hpp"
#include "jscc/source.hpp"

namespace jscc {

// Achievable-exponent evaluators and optimizers. All values in
// nats/channel use.
//
// Multi-class rate indexing follows the threshold partition: R_1 >= ... >=
// R_N with class 1 adjacent to the declared-error class. The optimizers for
// the relaxed (fixed-parameter) bound report the arithmetic rate schedule
// in ascending order (R, ..., R'), i.e. lowest rate first.

struct ExponentResult {
  double value = 0.0;
  std::vector<double> term_values;  // every term inside the outer min
  int active_term = -1;             // index of the binding minimum
  std::vector<double> rates;        // optimizing rates, if applicable
  std::vector<double> rhos;         // optimizing rho per term, if applicable
  double rate_lo = 0.0;             // (R, R') for the relaxed bound
  double rate_hi = 0.0;
  int iterations = 0;
};

// Multi-class exponent at fixed rates and per-class input distributions:
//   min_{i=0..N} { Er(R_i, Q_i) + t e(R_{i+1}/t) }
// with Er(R_0, Q_0) = 0 and R_{N+1} = 0 conventions. rates must be
// nonincreasing; dists has one entry per coded class (1..N).
ExponentResult thm1_exponent(const DiscreteSource& src, const ChannelSpec& ch,
                             const SourceChannelRatio& t,
                             const std::vector<double>& rates,
                             const std::vector<InputDistribution>& dists);

// Maximizes the multi-class exponent over nonincreasing rate vectors with
// per-class uniform inputs (coordinate ascent, multi-started from the
// relaxed-bound schedule and the separate-coding solution).
ExponentResult optimize_thm1(const DiscreteSource& src, const ChannelSpec& ch,
                             const SourceChannelRatio& t, int num_classes);

// Relaxed bound at fixed (R, R'), N >= 2: min of the three inner maxima.
ExponentResult thm2_exponent(const DiscreteSource& src, const ChannelSpec& ch,
                             const SourceChannelRatio& t, int num_classes,
                             double rate_lo, double rate_hi);

// Maximizes the relaxed bound over R' >= R >= 0 and reports the arithmetic
// rate schedule R_i = R + (i-1)(R'-R)/(N-1).
ExponentResult optimize_thm2(const DiscreteSource& src, const ChannelSpec& ch,
                             const SourceChannelRatio& t, int num_classes);

// max_R min{ Er(R), t e(R/t) }.
ExponentResult separate_exponent(const DiscreteSource& src,
                                 const ChannelSpec& ch,
                                 const SourceChannelRatio& t);

// max_{rho in [0,1]} { E0(rho) - t Es(rho) }.
ExponentResult joint_exponent(const DiscreteSource& src, const ChannelSpec& ch,
                              const SourceChannelRatio& t);

// min_R { Er(R) + t e(R/t) } = max_rho { hull(E0)(rho) - t Es(rho) }.
// Both sides are computed independently and must agree within 1e-5;
// disagreement throws (implementation defect signal). The right side is
// returned.
ExponentResult joint_hull_exponent(const DiscreteSource& src,
                                   const ChannelSpec& ch,
                                   const SourceChannelRatio& t);

// Same duality evaluation against an arbitrary E0-like curve on [0,1]
// (used to exercise the hull path on synthetic non-concave inputs).
ExponentResult joint_hull_from_e0(const DiscreteSource& src,
                                  const SourceChannelRatio& t,
                                  const std::function<double(double)>& e0_fn);

}  // namespace jscc

#endif
