#include "jscc/partition.hpp"

#include <cmath>
#include <stdexcept>

#include "jscc/numerics.hpp"

namespace jscc {

namespace {

// admissible per-symbol threshold band [band_lo, band_hi]
double band_lo(const DiscreteSource& src) {
  double s = 0.0;
  for (double lp : src.log_probs()) s += lp;
  return s / static_cast<double>(src.alphabet_size());
}

double band_hi(const DiscreteSource& src) {
  double s = 0.0;
  for (std::size_t i = 0; i < src.alphabet_size(); ++i) {
    s += src.probs()[i] * src.log_probs()[i];
  }
  return s;  // = -H(V)
}

}  // namespace

double rho_star_from_threshold(const DiscreteSource& src, double g) {
  const double lo = band_lo(src);
  const double hi = band_hi(src);
  if (g <= lo) return kRhoStarInf;
  if (g >= hi) return 0.0;
  // tilted_logprob_mean(sigma) is strictly increasing in sigma; bracket in
  // sigma = 1/(1+rho*) over (0, 1].
  double sig_lo = 1e-8;
  while (tilted_logprob_mean(src, sig_lo) > g && sig_lo > 1e-300) {
    sig_lo *= 1e-2;
  }
  const double sigma = bisect(
      [&](double s) { return tilted_logprob_mean(src, s) - g; }, sig_lo, 1.0,
      1e-16);
  return 1.0 / sigma - 1.0;
}

double rate_from_rho_star(const DiscreteSource& src,
                          const SourceChannelRatio& t, double rho_star) {
  if (rho_star < 0.0) throw std::domain_error("rho_star < 0");
  if (std::isinf(rho_star)) {
    return t.t * std::log(static_cast<double>(src.alphabet_size()));
  }
  return t.t * gallager_source_fn_deriv(src, rho_star);
}

double threshold_from_rate(const DiscreteSource& src,
                           const SourceChannelRatio& t, double rate) {
  const double r_lo = t.t * entropy(src);
  const double r_hi = t.t * std::log(static_cast<double>(src.alphabet_size()));
  const double slack = 1e-12 * std::max(1.0, r_hi);
  if (rate < r_lo - slack || rate > r_hi + slack) {
    throw std::domain_error("threshold_from_rate: rate outside [tH, t log|V|]");
  }
  if (rate <= r_lo) return band_hi(src);
  if (rate >= r_hi) return band_lo(src);
  // invert R = t Es'(rho*) then map rho* to g via the tilted mean
  const double target = rate / t.t;
  double hi = 1.0;
  while (gallager_source_fn_deriv(src, hi) < target && hi < 1e12) hi *= 2.0;
  const double rho_star = bisect(
      [&](double r) { return gallager_source_fn_deriv(src, r) - target; }, 0.0,
      hi);
  return tilted_logprob_mean(src, 1.0 / (1.0 + rho_star));
}

PartitionSpec PartitionSpec::from_thresholds(const DiscreteSource& src,
                                             const SourceChannelRatio& t,
                                             std::vector<double> g) {
  if (g.empty()) throw std::invalid_argument("partition needs N >= 1");
  const double lo = band_lo(src);
  const double hi = band_hi(src);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] < lo - 1e-12 || g[i] > hi + 1e-12) {
      throw std::invalid_argument("threshold outside admissible band");
    }
    if (i > 0 && !(g[i] > g[i - 1])) {
      throw std::invalid_argument("thresholds must be strictly increasing");
    }
  }
  PartitionSpec part;
  part.t_ = t.t;
  part.g_ = std::move(g);
  for (double gi : part.g_) {
    const double rs = rho_star_from_threshold(src, gi);
    part.rho_star_.push_back(rs);
    part.rates_.push_back(rate_from_rho_star(src, t, rs));
  }
  return part;
}

PartitionSpec PartitionSpec::from_rates(const DiscreteSource& src,
                                        const SourceChannelRatio& t,
                                        std::vector<double> rates) {
  if (rates.empty()) throw std::invalid_argument("partition needs N >= 1");
  for (std::size_t i = 1; i < rates.size(); ++i) {
    if (!(rates[i] < rates[i - 1])) {
      throw std::invalid_argument("rates must be strictly decreasing");
    }
  }
  std::vector<double> g;
  g.reserve(rates.size());
  for (double r : rates) g.push_back(threshold_from_rate(src, t, r));
  return from_thresholds(src, t, std::move(g));
}

double PartitionSpec::rho_star(int i) const {
  const int n = num_classes();
  if (i < 0 || i > n + 1) throw std::out_of_range("rho_star index");
  if (i == 0) return kRhoStarInf;
  if (i == n + 1) return 0.0;
  return rho_star_[i - 1];
}

double class_source_fn(const DiscreteSource& src, const PartitionSpec& part,
                       int class_index, double rho) {
  if (rho < 0.0) throw std::domain_error("class_source_fn: rho < 0");
  const int n = part.num_classes();
  if (class_index < 0 || class_index > n) {
    throw std::out_of_range("class index");
  }
  const double hi = part.rho_star(class_index);      // rho*_i
  const double lo = part.rho_star(class_index + 1);  // rho*_{i+1}
  if (lo > hi) return -std::numeric_limits<double>::infinity();  // empty
  if (rho > hi) {
    const double es = gallager_source_fn(src, hi);
    const double d = gallager_source_fn_deriv(src, hi);
    return es + (rho - hi) * d;
  }
  if (rho < lo) {
    const double es = gallager_source_fn(src, lo);
    const double d = gallager_source_fn_deriv(src, lo);
    return es + (rho - lo) * d;
  }
  return gallager_source_fn(src, rho);
}

ClassProbExponent class_prob_exponent(const DiscreteSource& src,
                                      const SourceChannelRatio& t,
                                      const PartitionSpec& part,
                                      int class_index) {
  const int n = part.num_classes();
  if (class_index < 0 || class_index > n) {
    throw std::out_of_range("class index");
  }
  double e = 0.0;
  if (class_index < n) {
    // upper threshold g_{i+1} determines the exponent via R_{i+1}
    const double r_next = part.rates()[class_index];  // R_{i+1}, 0-based list
    e = source_reliability(src, r_next / t.t);
  }
  return {-e, -t.t * e};
}

std::vector<ClassInfo> realize_partition_bms(const DiscreteSource& src, int k,
                                             const PartitionSpec& part) {
  if (!src.is_binary() || src.p1() > 0.5) {
    throw std::invalid_argument("realize_partition_bms: need binary p <= 1/2");
  }
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const int n = part.num_classes();
  const double lp1 = src.log_probs()[1];
  const double lp0 = src.log_probs()[0];
  const double log_v = std::log(2.0);

  std::vector<ClassInfo> classes(n + 1);
  for (int i = 0; i <= n; ++i) {
    classes[i].index = i;
    classes[i].rho_star_hi = part.rho_star(i);
    classes[i].rho_star_lo = part.rho_star(i + 1);
    classes[i].rate = i == 0 ? part.t() * log_v : part.rates()[i - 1];
    classes[i].w_lo = k + 1;  // empty until a weight lands here
    classes[i].w_hi = -1;
  }

  for (int w = 0; w <= k; ++w) {
    // per-symbol log probability of a weight-w sequence
    const double ell =
        (static_cast<double>(w) * lp1 + static_cast<double>(k - w) * lp0) /
        static_cast<double>(k);
    // class i: g_i < ell <= g_{i+1}, with g_0 = -inf, g_{N+1} = 0
    int cls = 0;
    for (int i = n; i >= 1; --i) {
      if (ell > part.thresholds()[i - 1]) {
        cls = i;
        break;
      }
    }
    classes[cls].w_lo = std::min(classes[cls].w_lo, w);
    classes[cls].w_hi = std::max(classes[cls].w_hi, w);
  }
  return classes;
}

}  // namespace jscc
