#ifndef JSCC_NUMERICS_HPP
#define JSCC_NUMERICS_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace jscc {

// Scalar root finding and 1-D optimization helpers shared by all modules.
// Tolerances follow the project-wide convention: 1e-10 on the argument,
// 200 iterations max.

inline constexpr double kArgTol = 1e-10;
inline constexpr int kMaxIter = 200;

// Root of a monotone function f on [lo, hi] with f(lo), f(hi) of opposite
// sign (or zero). Plain bisection.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol = kArgTol, int max_iter = kMaxIter);

struct ScalarMax {
  double x;
  double fx;
  int iterations;
};

// Golden-section maximization of a unimodal f on [a, b].
ScalarMax golden_max(const std::function<double(double)>& f, double a, double b,
                     double xtol = kArgTol);

// Adaptive Simpson quadrature with absolute tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12);

// log(sum(exp(v))) with the usual max shift; -inf entries are skipped.
double log_sum_exp(const std::vector<double>& v);
double log_add(double a, double b);

// Gauss-Hermite rule for integrals of the form
//   \int f(u) e^{-u^2} du  ~=  sum_i w_i f(x_i).
// Weights are also kept in log form so integrands with huge dynamic range
// can be accumulated via log_sum_exp.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> log_weights;
};

// Cached, thread-safe lookup; rules are built once per node count.
const GaussHermiteRule& gauss_hermite(int n);

struct WilsonInterval {
  double lo;
  double hi;
};

// 95% Wilson score interval for a binomial proportion.
WilsonInterval wilson_interval(std::uint64_t errors, std::uint64_t trials);

// Deterministic splittable stream: every (seed, stream) pair yields an
// independent reproducible sequence, identical across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  SplitMix64(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();
  double uniform();               // [0, 1)
  double gaussian();              // standard normal, Box-Muller
 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace jscc

#endif
