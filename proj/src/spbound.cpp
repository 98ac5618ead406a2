#include "jscc/spbound.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "jscc/numerics.hpp"

namespace jscc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// log of the full integral int_0^pi sin^{n-2} = sqrt(pi) G((n-1)/2)/G(n/2)
double log_total_sin_integral(int n) {
  return 0.5 * std::log(kPi) + std::lgamma((n - 1) / 2.0) -
         std::lgamma(n / 2.0);
}

// log int_0^theta sin^{n-2} phi dphi for theta in (0, pi/2]; the integrand
// peaks at theta, so it is factored out before quadrature.
double log_inc_sin_integral(int n, double theta) {
  const double m = static_cast<double>(n - 2);
  const double peak = m * std::log(std::sin(theta));
  const double scaled = integrate(
      [&](double phi) {
        if (phi <= 0.0) return 0.0;
        return std::exp(m * std::log(std::sin(phi)) - peak);
      },
      0.0, theta, 1e-13);
  return peak + std::log(scaled);
}

// log F(theta), F the solid-angle fraction of the cone.
double log_cone_fraction(int n, double theta) {
  const double lt = log_total_sin_integral(n);
  if (theta <= kPi / 2.0) return log_inc_sin_integral(n, theta) - lt;
  const double f_comp = std::exp(log_inc_sin_integral(n, kPi - theta) - lt);
  return std::log1p(-f_comp);
}

// log of the unnormalized angle density
//   p(phi) ~ sin^{n-2} phi * exp(-A^2 sin^2 phi / 2)
//              * int_0^inf r^{n-1} exp(-(r - A cos phi)^2 / 2) dr,
// radial integral handled by factoring out its peak.
double log_angle_density(int n, double a, double phi) {
  if (phi <= 0.0 || phi >= kPi) {
    return -std::numeric_limits<double>::infinity();
  }
  const double b = a * std::cos(phi);
  const double nm1 = static_cast<double>(n - 1);
  const double r_star = 0.5 * (b + std::sqrt(b * b + 4.0 * nm1));
  auto psi = [&](double r) {
    return nm1 * std::log(r) - 0.5 * (r - b) * (r - b);
  };
  const double peak = psi(r_star);
  const double sigma = 1.0 / std::sqrt(nm1 / (r_star * r_star) + 1.0);
  const double lo = std::max(1e-300, r_star - 15.0 * sigma);
  const double hi = r_star + 15.0 * sigma;
  const double radial = integrate(
      [&](double r) { return std::exp(psi(r) - peak); }, lo, hi, 1e-12);
  return static_cast<double>(n - 2) * std::log(std::sin(phi)) -
         0.5 * a * a * std::sin(phi) * std::sin(phi) + peak +
         std::log(radial);
}

}  // namespace

double cone_half_angle(int n, double rate_bits) {
  if (n < 2) throw std::invalid_argument("cone_half_angle: n >= 2");
  if (rate_bits < 0.0) throw std::invalid_argument("cone_half_angle: R >= 0");
  if (rate_bits == 0.0) return kPi;
  const double target = -static_cast<double>(n) * rate_bits * std::log(2.0);
  return bisect(
      [&](double th) { return log_cone_fraction(n, th) - target; }, 1e-12,
      kPi - 1e-12, 1e-14, 300);
}

double cone_error_prob(int n, double theta, double es_n0, double rel_tol) {
  if (n < 2 || es_n0 <= 0.0) {
    throw std::invalid_argument("cone_error_prob: need n >= 2, es_n0 > 0");
  }
  if (theta >= kPi) return 0.0;
  if (theta <= 0.0) return 1.0;
  const double a = std::sqrt(2.0 * static_cast<double>(n) * es_n0);

  // locate the density mode on a coarse grid, then refine
  double mode = kPi / 2.0;
  double mode_val = -std::numeric_limits<double>::infinity();
  const int grid = 512;
  for (int i = 1; i < grid; ++i) {
    const double phi = kPi * i / grid;
    const double v = log_angle_density(n, a, phi);
    if (v > mode_val) {
      mode_val = v;
      mode = phi;
    }
  }
  const ScalarMax refined =
      golden_max([&](double phi) { return log_angle_density(n, a, phi); },
                 std::max(1e-9, mode - kPi / grid),
                 std::min(kPi - 1e-9, mode + kPi / grid));
  mode = refined.x;
  mode_val = refined.fx;

  const double tol = rel_tol * 1e-2;
  auto logd = [&](double phi) { return log_angle_density(n, a, phi); };

  // At high SNR the density is a spike of width ~1/a; adaptive quadrature
  // over the full interval can step right over it. Integrate only where the
  // density is within e^-90 of the local anchor (the truncated mass is
  // negligible at any meaningful tolerance).
  auto cut_below = [&](double ref, double lo, double hi) {
    if (logd(lo) >= ref - 90.0) return lo;
    return bisect([&](double phi) { return logd(phi) - (ref - 90.0); }, lo, hi,
                  1e-12, 200);
  };
  auto cut_above = [&](double ref, double lo, double hi) {
    if (logd(hi) >= ref - 90.0) return hi;
    return bisect([&](double phi) { return logd(phi) - (ref - 90.0); }, lo, hi,
                  1e-12, 200);
  };
  const double lo_w = cut_below(mode_val, 1e-12, mode);
  const double hi_w = cut_above(mode_val, mode, kPi - 1e-12);
  const double total = integrate(
      [&](double phi) { return std::exp(logd(phi) - mode_val); }, lo_w, hi_w,
      tol);

  // tail scaled by its own maximum so small Q keeps relative accuracy
  const double tail_anchor = std::max(theta, mode);
  const double tail_val = logd(tail_anchor);
  const double tail_lo = std::max(theta, cut_below(tail_val, 1e-12, tail_anchor));
  const double tail_hi = cut_above(tail_val, tail_anchor, kPi - 1e-12);
  const double tail = integrate(
      [&](double phi) { return std::exp(logd(phi) - tail_val); }, tail_lo,
      tail_hi, tol);
  return std::exp(tail_val - mode_val) * tail / total;
}

double binomial_tail(int k, double p, int w1, int w2) {
  if (k < 0 || w1 < 0 || w2 > k) {
    throw std::invalid_argument("binomial_tail: invalid weight range");
  }
  if (w1 > w2) return 0.0;
  if (p <= 0.0) return w1 == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return w2 == k ? 1.0 : 0.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double lgk = std::lgamma(k + 1.0);
  std::vector<double> terms;
  terms.reserve(w2 - w1 + 1);
  double mx = -std::numeric_limits<double>::infinity();
  for (int w = w1; w <= w2; ++w) {
    const double lt = lgk - std::lgamma(w + 1.0) - std::lgamma(k - w + 1.0) +
                      w * lp + (k - w) * lq;
    terms.push_back(lt);
    mx = std::max(mx, lt);
  }
  // compensated (Kahan) accumulation of the scaled terms
  double sum = 0.0, c = 0.0;
  for (double lt : terms) {
    const double y = std::exp(lt - mx) - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return std::min(1.0, std::exp(mx) * sum);
}

double class_rate_bits(int n, int k, int w1, int w2) {
  if (n < 1 || w1 < 0 || w2 > k || w1 > w2) {
    throw std::invalid_argument("class_rate_bits: invalid range");
  }
  using boost::multiprecision::cpp_int;
  cpp_int sum = 0;
  cpp_int c = 1;  // C(k, 0)
  for (int w = 0; w <= w2; ++w) {
    if (w >= w1) sum += c;
    c = c * (k - w) / (w + 1);
  }
  if (sum <= 1) return 0.0;
  const unsigned bits = boost::multiprecision::msb(sum);  // floor(log2)
  const bool pow2 = (sum & (sum - 1)) == 0;
  const unsigned ceil_log2 = pow2 ? bits : bits + 1;
  return static_cast<double>(ceil_log2) / static_cast<double>(n);
}

TwoClassBound two_class_lower_bound(int k, int n, double p, double es_n0,
                                    double rel_tol) {
  if (k < 2) throw std::invalid_argument("two_class_lower_bound: k >= 2");
  // Q(theta_{n,R}) per distinct rate; R takes at most k+1 distinct values
  std::map<std::int64_t, double> q_memo;
  auto q_of_rate = [&](double r_bits) {
    const auto key = static_cast<std::int64_t>(std::llround(r_bits * 1e12));
    auto it = q_memo.find(key);
    if (it != q_memo.end()) return it->second;
    const double q =
        cone_error_prob(n, cone_half_angle(n, r_bits), es_n0, rel_tol);
    q_memo.emplace(key, q);
    return q;
  };

  TwoClassBound best{std::numeric_limits<double>::infinity(), 0, 1, 0.0, 0.0};
  for (int w1 = 0; w1 < k; ++w1) {
    const double b1 = binomial_tail(k, p, 0, w1);
    const double r1 = class_rate_bits(n, k, 0, w1);
    const double q1 = q_of_rate(r1);
    const double head = b1 * q1;
    if (head >= best.value) continue;  // terms only grow with w2
    for (int w2 = w1 + 1; w2 <= k; ++w2) {
      const double r2 = class_rate_bits(n, k, w1 + 1, w2);
      const double v = head + binomial_tail(k, p, w1 + 1, w2) * q_of_rate(r2) +
                       binomial_tail(k, p, w2 + 1, k);
      if (v < best.value) best = {v, w1, w2, r1, r2};
    }
  }
  best.value = std::min(best.value, 1.0);
  return best;
}

}  // namespace jscc
