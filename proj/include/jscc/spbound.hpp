#ifndef JSCC_SPBOUND_HPP
#define JSCC_SPBOUND_HPP

namespace jscc {

// Shannon cone-packing machinery for the Gaussian channel and the
// two-class converse built on it. Rates in this module are in BITS per
// channel use (the bound's rate definition is base-2); everything else in
// the library stays in nats.

struct ConeGeometry {
  int n;
  double theta;      // half-angle, radians
  double rate_bits;  // R with solid-angle fraction 2^{-nR}
};

// Half-angle theta_{n,R} with Omega(theta)/Omega_n = 2^{-nR}; solved by
// bisection on log F(theta), F the normalized incomplete sin^{n-2}
// integral. R = 0 gives pi.
double cone_half_angle(int n, double rate_bits);

// Q(theta): probability that a signal of squared radius n Es, Es/N0 given,
// leaves the cone of half-angle theta under AWGN with variance N0/2 per
// dimension. Exact angle-density quadrature (no high-rate approximation).
double cone_error_prob(int n, double theta, double es_n0,
                       double rel_tol = 1e-8);

// B_{k,p}(w1, w2) = sum_{w=w1}^{w2} C(k,w) p^w (1-p)^{k-w}; exact in log
// domain with compensated accumulation. Empty range (w1 > w2) gives 0.
double binomial_tail(int k, double p, int w1, int w2);

// R(w1, w2) = ceil(log2 sum_{w=w1}^{w2} C(k,w)) / n, the ceiling taken on
// the exact big-integer sum.
double class_rate_bits(int n, int k, int w1, int w2);

struct TwoClassBound {
  double value;
  int w1;
  int w2;
  double r1_bits;  // R(0, w1)
  double r2_bits;  // R(w1+1, w2)
};

// Exhaustive minimization over 0 <= w1 < w2 <= k of
//   B(0,w1) Q(theta_{n,R(0,w1)}) + B(w1+1,w2) Q(theta_{n,R(w1+1,w2)})
//     + B(w2+1,k),
// with Q memoized per distinct rate.
TwoClassBound two_class_lower_bound(int k, int n, double p, double es_n0,
                                    double rel_tol = 1e-8);

}  // namespace jscc

#endif
