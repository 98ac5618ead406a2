#include "jscc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "jscc/numerics.hpp"

namespace jscc {

InputDistribution::InputDistribution(std::vector<double> p)
    : probs(std::move(p)) {
  if (probs.empty()) throw std::invalid_argument("empty input distribution");
  double sum = 0.0;
  for (double x : probs) {
    if (x < 0.0) throw std::invalid_argument("negative input probability");
    sum += x;
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("input distribution must sum to 1");
  }
}

InputDistribution InputDistribution::uniform(std::size_t n) {
  return InputDistribution(
      std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ChannelSpec ChannelSpec::dmc(std::vector<std::vector<double>> transition) {
  if (transition.empty() || transition[0].empty()) {
    throw std::invalid_argument("empty transition matrix");
  }
  const std::size_t cols = transition[0].size();
  for (const auto& row : transition) {
    if (row.size() != cols) throw std::invalid_argument("ragged matrix");
    double sum = 0.0;
    for (double w : row) {
      if (w < 0.0) throw std::invalid_argument("negative transition prob");
      sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("transition rows must sum to 1");
    }
  }
  ChannelSpec ch;
  ch.kind_ = Kind::Dmc;
  ch.transition_ = std::move(transition);
  return ch;
}

ChannelSpec ChannelSpec::bsc(double crossover) {
  return dmc({{1.0 - crossover, crossover}, {crossover, 1.0 - crossover}});
}

ChannelSpec ChannelSpec::bi_awgn(double es_n0) {
  if (!(es_n0 > 0.0)) throw std::invalid_argument("es_n0 must be > 0");
  ChannelSpec ch;
  ch.kind_ = Kind::BiAwgn;
  ch.es_n0_ = es_n0;
  return ch;
}

const std::vector<std::vector<double>>& ChannelSpec::transition() const {
  if (kind_ != Kind::Dmc) throw std::logic_error("not a DMC");
  return transition_;
}

double ChannelSpec::es_n0() const {
  if (kind_ != Kind::BiAwgn) throw std::logic_error("not a BiAwgn channel");
  return es_n0_;
}

std::size_t ChannelSpec::input_count() const {
  return kind_ == Kind::Dmc ? transition_.size() : 2;
}

bool ChannelSpec::is_symmetric_binary() const {
  if (kind_ == Kind::BiAwgn) return true;
  if (transition_.size() != 2) return false;
  // second row a permutation of the first
  std::vector<double> a = transition_[0];
  std::vector<double> b = transition_[1];
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::fabs(a[i] - b[i]) > 1e-12) return false;
  }
  return true;
}

namespace {

constexpr double kQuadTol = 1e-10;
constexpr int kNodesStart = 64;
constexpr int kNodesCap = 4096;

void check_rho(double rho) {
  if (rho < 0.0 || rho > 10.0) {
    throw std::domain_error("e0: rho outside [0, 10]");
  }
}

double e0_dmc_impl(const std::vector<std::vector<double>>& w,
                   const std::vector<double>& q, double rho) {
  const double s = 1.0 / (1.0 + rho);
  const std::size_t ny = w[0].size();
  std::vector<double> outer;
  outer.reserve(ny);
  std::vector<double> inner(w.size());
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t x = 0; x < w.size(); ++x) {
      inner[x] = (q[x] > 0.0 && w[x][y] > 0.0)
                     ? std::log(q[x]) + s * std::log(w[x][y])
                     : -std::numeric_limits<double>::infinity();
    }
    outer.push_back((1.0 + rho) * log_sum_exp(inner));
  }
  return -log_sum_exp(outer);
}

// BiAwgn output integral at a fixed Gauss-Hermite node count. The integrand
// is written as M(y) g(y) with M the output mixture density, so the integral
// becomes a sum of Gaussian expectations, one per input.
double e0_biawgn_fixed(double es_n0, const std::vector<double>& q, double rho,
                       int nodes) {
  const double sigma2 = 1.0 / (2.0 * es_n0);
  const double sigma = std::sqrt(sigma2);
  const double s = 1.0 / (1.0 + rho);
  const double mu[2] = {1.0, -1.0};
  const double lq[2] = {
      q[0] > 0.0 ? std::log(q[0]) : -std::numeric_limits<double>::infinity(),
      q[1] > 0.0 ? std::log(q[1]) : -std::numeric_limits<double>::infinity()};
  const GaussHermiteRule& rule = gauss_hermite(nodes);

  // log g(y) = (1/s) lse_x(lq + s logW) - lse_x(lq + logW); the constant
  // Gaussian normalizer cancels between numerator and denominator up to the
  // factor ((2 pi sigma^2)^{-1/2})^{...}; keep it explicit for safety.
  const double lnorm = -0.5 * std::log(2.0 * M_PI * sigma2);
  auto log_g = [&](double y) {
    double a0 = lq[0] + s * (lnorm - (y - mu[0]) * (y - mu[0]) / (2.0 * sigma2));
    double a1 = lq[1] + s * (lnorm - (y - mu[1]) * (y - mu[1]) / (2.0 * sigma2));
    double b0 = lq[0] + lnorm - (y - mu[0]) * (y - mu[0]) / (2.0 * sigma2);
    double b1 = lq[1] + lnorm - (y - mu[1]) * (y - mu[1]) / (2.0 * sigma2);
    return (1.0 / s) * log_add(a0, a1) - log_add(b0, b1);
  };

  std::vector<double> parts;
  parts.reserve(2);
  const double lsqrt_pi = 0.5 * std::log(M_PI);
  for (int x = 0; x < 2; ++x) {
    if (std::isinf(lq[x])) continue;
    std::vector<double> terms;
    terms.reserve(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      if (std::isinf(rule.log_weights[i])) continue;
      const double y = mu[x] + std::sqrt(2.0) * sigma * rule.nodes[i];
      terms.push_back(rule.log_weights[i] + log_g(y));
    }
    parts.push_back(lq[x] + log_sum_exp(terms) - lsqrt_pi);
  }
  return -log_sum_exp(parts);
}

double e0_biawgn_adaptive(double es_n0, const std::vector<double>& q,
                          double rho, int* accepted_nodes = nullptr) {
  double prev = e0_biawgn_fixed(es_n0, q, rho, kNodesStart);
  for (int n = 2 * kNodesStart; n <= kNodesCap; n *= 2) {
    const double cur = e0_biawgn_fixed(es_n0, q, rho, n);
    if (std::fabs(cur - prev) < kQuadTol) {
      if (accepted_nodes) *accepted_nodes = n;
      return cur;
    }
    prev = cur;
  }
  throw std::runtime_error("e0: Gauss-Hermite quadrature did not converge");
}

std::vector<double> project_simplex(std::vector<double> v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    css += u[i];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  for (double& x : v) x = std::max(0.0, x - theta);
  return v;
}

// dE0/dQ(x) for a DMC.
std::vector<double> e0_grad_dmc(const std::vector<std::vector<double>>& w,
                                const std::vector<double>& q, double rho) {
  const double s = 1.0 / (1.0 + rho);
  const std::size_t nx = w.size();
  const std::size_t ny = w[0].size();
  std::vector<double> beta(ny, 0.0);
  double f = 0.0;
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t x = 0; x < nx; ++x) {
      beta[y] += q[x] * std::pow(w[x][y], s);
    }
    f += std::pow(beta[y], 1.0 + rho);
  }
  std::vector<double> grad(nx, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    double g = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      g += std::pow(beta[y], rho) * std::pow(w[x][y], s);
    }
    grad[x] = -(1.0 + rho) * g / f;
  }
  return grad;
}

double e0_max_ascent(const std::vector<std::vector<double>>& w, double rho) {
  const std::size_t nx = w.size();
  std::vector<double> q(nx, 1.0 / static_cast<double>(nx));
  double val = e0_dmc_impl(w, q, rho);
  double step = 1.0;
  for (int it = 0; it < 5000; ++it) {
    const std::vector<double> grad = e0_grad_dmc(w, q, rho);
    bool improved = false;
    while (step > 1e-14) {
      std::vector<double> cand(nx);
      for (std::size_t x = 0; x < nx; ++x) cand[x] = q[x] + step * grad[x];
      cand = project_simplex(std::move(cand));
      const double cv = e0_dmc_impl(w, cand, rho);
      if (cv > val) {
        const double gain = cv - val;
        q = std::move(cand);
        val = cv;
        step *= 1.5;
        improved = true;
        if (gain < 1e-13) return val;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return val;
}

}  // namespace

double e0(const ChannelSpec& ch, const InputDistribution& q, double rho) {
  check_rho(rho);
  if (q.probs.size() != ch.input_count()) {
    throw std::invalid_argument("input distribution size mismatch");
  }
  if (rho == 0.0) return 0.0;
  if (ch.kind() == ChannelSpec::Kind::Dmc) {
    return e0_dmc_impl(ch.transition(), q.probs, rho);
  }
  return e0_biawgn_adaptive(ch.es_n0(), q.probs, rho);
}

double mutual_information(const ChannelSpec& ch, const InputDistribution& q) {
  if (ch.kind() == ChannelSpec::Kind::Dmc) {
    const auto& w = ch.transition();
    const std::size_t ny = w[0].size();
    std::vector<double> marg(ny, 0.0);
    for (std::size_t x = 0; x < w.size(); ++x) {
      for (std::size_t y = 0; y < ny; ++y) marg[y] += q.probs[x] * w[x][y];
    }
    double mi = 0.0;
    for (std::size_t x = 0; x < w.size(); ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        if (q.probs[x] > 0.0 && w[x][y] > 0.0) {
          mi += q.probs[x] * w[x][y] * std::log(w[x][y] / marg[y]);
        }
      }
    }
    return mi;
  }
  // BiAwgn: I = sum_x q_x E_{N(mu_x)}[log W_x - log M], node doubling.
  const double sigma2 = 1.0 / (2.0 * ch.es_n0());
  const double sigma = std::sqrt(sigma2);
  const double mu[2] = {1.0, -1.0};
  auto eval = [&](int nodes) {
    const GaussHermiteRule& rule = gauss_hermite(nodes);
    double mi = 0.0;
    for (int x = 0; x < 2; ++x) {
      if (q.probs[x] <= 0.0) continue;
      double acc = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double y = mu[x] + std::sqrt(2.0) * sigma * rule.nodes[i];
        double lw0 = -(y - mu[0]) * (y - mu[0]) / (2.0 * sigma2);
        double lw1 = -(y - mu[1]) * (y - mu[1]) / (2.0 * sigma2);
        double lm = log_add(
            q.probs[0] > 0.0 ? std::log(q.probs[0]) + lw0
                             : -std::numeric_limits<double>::infinity(),
            q.probs[1] > 0.0 ? std::log(q.probs[1]) + lw1
                             : -std::numeric_limits<double>::infinity());
        const double lwx = x == 0 ? lw0 : lw1;
        acc += rule.weights[i] * (lwx - lm);
      }
      mi += q.probs[x] * acc / std::sqrt(M_PI);
    }
    return mi;
  };
  double prev = eval(kNodesStart);
  for (int n = 2 * kNodesStart; n <= kNodesCap; n *= 2) {
    const double cur = eval(n);
    if (std::fabs(cur - prev) < kQuadTol) return cur;
    prev = cur;
  }
  throw std::runtime_error("mutual_information: quadrature did not converge");
}

double random_coding_exponent(const ChannelSpec& ch, const InputDistribution& q,
                              double rate) {
  if (rate < 0.0) throw std::domain_error("rate < 0");
  const ScalarMax m = golden_max(
      [&](double rho) { return e0(ch, q, rho) - rho * rate; }, 0.0, 1.0);
  return std::max(0.0, m.fx);
}

double e0_max(const ChannelSpec& ch, double rho) {
  check_rho(rho);
  if (rho == 0.0) return 0.0;
  if (ch.is_symmetric_binary()) {
    return e0(ch, InputDistribution::uniform(2), rho);
  }
  return e0_max_ascent(ch.transition(), rho);
}

double random_coding_exponent_max(const ChannelSpec& ch, double rate) {
  if (rate < 0.0) throw std::domain_error("rate < 0");
  const ScalarMax m = golden_max(
      [&](double rho) { return e0_max(ch, rho) - rho * rate; }, 0.0, 1.0);
  return std::max(0.0, m.fx);
}

std::vector<double> upper_concave_envelope(const std::vector<double>& x,
                                           const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("upper_concave_envelope: bad input");
  }
  const std::size_t n = x.size();
  // monotone-chain upper hull over the sample points
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < n; ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull[hull.size() - 1];
      const double cross = (x[b] - x[a]) * (y[i] - y[a]) -
                           (y[b] - y[a]) * (x[i] - x[a]);
      if (cross >= 0.0) {
        hull.pop_back();  // b lies on or below chord a--i
      } else {
        break;
      }
    }
    hull.push_back(i);
  }
  std::vector<double> env(n);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (seg + 1 < hull.size() && x[hull[seg + 1]] < x[i]) ++seg;
    if (seg + 1 >= hull.size()) {
      env[i] = y[hull.back()];
      continue;
    }
    const std::size_t a = hull[seg];
    const std::size_t b = hull[seg + 1];
    const double lambda = (x[i] - x[a]) / (x[b] - x[a]);
    env[i] = y[a] + lambda * (y[b] - y[a]);
  }
  return env;
}

namespace {

// Fast fixed-cost evaluator for e0_max used when filling dense tables.
std::function<double(double)> make_fast_e0max(const ChannelSpec& ch) {
  if (ch.kind() == ChannelSpec::Kind::BiAwgn) {
    const double es_n0 = ch.es_n0();
    const std::vector<double> q = {0.5, 0.5};
    int nodes = kNodesStart;
    int n1 = 0, n2 = 0;
    (void)e0_biawgn_adaptive(es_n0, q, 0.5, &n1);
    (void)e0_biawgn_adaptive(es_n0, q, 1.0, &n2);
    nodes = std::max(n1, n2);
    return [es_n0, q, nodes](double rho) {
      if (rho == 0.0) return 0.0;
      return e0_biawgn_fixed(es_n0, q, rho, nodes);
    };
  }
  if (ch.is_symmetric_binary()) {
    const auto w = ch.transition();
    return [w](double rho) {
      return e0_dmc_impl(w, {0.5, 0.5}, rho);
    };
  }
  const auto w = ch.transition();
  return [w](double rho) {
    if (rho == 0.0) return 0.0;
    return e0_max_ascent(w, rho);
  };
}

}  // namespace

E0Table::E0Table(const ChannelSpec& ch, int points)
    : E0Table(make_fast_e0max(ch), points) {}

E0Table::E0Table(const std::function<double(double)>& e0_fn, int points) {
  if (points < 4) throw std::invalid_argument("E0Table: too few points");
  values_.resize(points);
  step_ = 1.0 / static_cast<double>(points - 1);
  for (int i = 0; i < points; ++i) {
    values_[i] = e0_fn(static_cast<double>(i) * step_);
  }
}

double E0Table::operator()(double rho) const {
  if (rho < 0.0 || rho > 1.0 + 1e-12) {
    throw std::domain_error("E0Table: rho outside [0, 1]");
  }
  rho = std::min(rho, 1.0);
  const int n = static_cast<int>(values_.size());
  double fi = rho / step_;
  int i = std::min(static_cast<int>(fi), n - 2);
  const double u = fi - i;
  // Catmull-Rom in Hermite form. Boundary tangents use second-order
  // one-sided differences: duplicating the end node would halve the end
  // tangent and bias the first/last segment by O(slope * step), which is
  // where Er's maximizer sits at high SNR.
  auto tangent = [&](int j) {
    if (j == 0) {
      return 0.5 * (-3.0 * values_[0] + 4.0 * values_[1] - values_[2]);
    }
    if (j == n - 1) {
      return 0.5 *
             (3.0 * values_[n - 1] - 4.0 * values_[n - 2] + values_[n - 3]);
    }
    return 0.5 * (values_[j + 1] - values_[j - 1]);
  };
  const double y1 = values_[i];
  const double y2 = values_[i + 1];
  const double m1 = tangent(i);
  const double m2 = tangent(i + 1);
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2.0 * u3 - 3.0 * u2 + 1.0) * y1 + (u3 - 2.0 * u2 + u) * m1 +
         (-2.0 * u3 + 3.0 * u2) * y2 + (u3 - u2) * m2;
}

ConcaveHullTable::ConcaveHullTable(const ChannelSpec& ch, int points)
    : ConcaveHullTable(make_fast_e0max(ch), points) {}

ConcaveHullTable::ConcaveHullTable(const std::function<double(double)>& e0_fn,
                                   int points) {
  std::vector<double> xs(points), ys(points);
  step_ = 1.0 / static_cast<double>(points - 1);
  for (int i = 0; i < points; ++i) {
    xs[i] = static_cast<double>(i) * step_;
    ys[i] = e0_fn(xs[i]);
  }
  hull_ = upper_concave_envelope(xs, ys);
}

double ConcaveHullTable::operator()(double rho) const {
  if (rho < 0.0 || rho > 1.0 + 1e-12) {
    throw std::domain_error("ConcaveHullTable: rho outside [0, 1]");
  }
  rho = std::min(rho, 1.0);
  const int n = static_cast<int>(hull_.size());
  double fi = rho / step_;
  int i = std::min(static_cast<int>(fi), n - 2);
  const double u = fi - i;
  return hull_[i] + u * (hull_[i + 1] - hull_[i]);
}

double e0_concave_hull(const ChannelSpec& ch, double rho) {
  ConcaveHullTable table(ch);
  return table(rho);
}

}  // namespace jscc
