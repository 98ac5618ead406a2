#include "jscc/source.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "jscc/numerics.hpp"

namespace jscc {

DiscreteSource::DiscreteSource(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw std::invalid_argument("source needs at least 2 symbols");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p > 0.0)) {
      throw std::invalid_argument("source probabilities must be > 0");
    }
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("source probabilities must sum to 1");
  }
  log_probs_.reserve(probs_.size());
  for (double p : probs_) log_probs_.push_back(std::log(p));
}

DiscreteSource DiscreteSource::binary(double p1) {
  return DiscreteSource({1.0 - p1, p1});
}

double DiscreteSource::p1() const {
  if (!is_binary()) throw std::logic_error("p1() requires a binary source");
  return probs_[1];
}

SourceChannelRatio::SourceChannelRatio(double value) : t(value) {
  if (!(value > 0.0)) throw std::invalid_argument("ratio t must be > 0");
}

double entropy(const DiscreteSource& src) {
  double h = 0.0;
  for (std::size_t i = 0; i < src.alphabet_size(); ++i) {
    h -= src.probs()[i] * src.log_probs()[i];
  }
  return h;
}

namespace {

// log sum_v p(v)^sigma, sigma > 0.
double log_tilt_norm(const DiscreteSource& src, double sigma) {
  std::vector<double> terms;
  terms.reserve(src.alphabet_size());
  for (double lp : src.log_probs()) terms.push_back(sigma * lp);
  return log_sum_exp(terms);
}

}  // namespace

double gallager_source_fn(const DiscreteSource& src, double rho) {
  if (rho < 0.0) throw std::domain_error("gallager_source_fn: rho < 0");
  const double sigma = 1.0 / (1.0 + rho);
  return (1.0 + rho) * log_tilt_norm(src, sigma);
}

double gallager_source_fn_deriv(const DiscreteSource& src, double rho) {
  if (rho < 0.0) throw std::domain_error("gallager_source_fn_deriv: rho < 0");
  const double sigma = 1.0 / (1.0 + rho);
  // Es'(rho) = log Z(sigma) - sigma * E_sigma[log p] = H(p_sigma)
  const double log_z = log_tilt_norm(src, sigma);
  return log_z - sigma * tilted_logprob_mean(src, sigma);
}

DiscreteSource tilted_distribution(const DiscreteSource& src, double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("tilted_distribution: sigma <= 0");
  const double log_z = log_tilt_norm(src, sigma);
  if (!std::isfinite(log_z)) {
    throw std::runtime_error("tilted_distribution: normalization underflow");
  }
  std::vector<double> out;
  out.reserve(src.alphabet_size());
  for (double lp : src.log_probs()) out.push_back(std::exp(sigma * lp - log_z));
  return DiscreteSource(std::move(out));
}

double tilted_logprob_mean(const DiscreteSource& src, double sigma) {
  const double log_z = log_tilt_norm(src, sigma);
  double m = 0.0;
  for (double lp : src.log_probs()) {
    m += std::exp(sigma * lp - log_z) * lp;
  }
  return m;
}

double source_reliability(const DiscreteSource& src, double rate) {
  if (rate < 0.0) throw std::domain_error("source_reliability: rate < 0");
  const double h = entropy(src);
  const double log_v = std::log(static_cast<double>(src.alphabet_size()));
  if (rate <= h) return 0.0;  // sup attained at rho = 0
  if (rate > log_v) {
    if (rate - log_v > 1e-12 * std::max(1.0, log_v)) {
      return std::numeric_limits<double>::infinity();
    }
    // e(log|V|) = D(uniform || P)
    double d = -log_v;
    for (double lp : src.log_probs()) {
      d -= lp / static_cast<double>(src.alphabet_size());
    }
    return d;
  }
  // Es' is nondecreasing from H to log|V|; bracket then bisect Es'(rho)=R.
  double hi = 1.0;
  while (gallager_source_fn_deriv(src, hi) < rate && hi < 1e12) hi *= 2.0;
  const double rho_star = bisect(
      [&](double r) { return gallager_source_fn_deriv(src, r) - rate; }, 0.0,
      hi);
  return rho_star * rate - gallager_source_fn(src, rho_star);
}

double ebn0_to_esn0(double ebn0_db, const SourceChannelRatio& t,
                    const DiscreteSource& src) {
  if (!src.is_binary()) {
    throw std::invalid_argument("ebn0_to_esn0: binary source required");
  }
  const double h2_bits = entropy(src) / std::log(2.0);
  return t.t * h2_bits * std::pow(10.0, ebn0_db / 10.0);
}

}  // namespace jscc
