#include "jscc/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "jscc/numerics.hpp"

namespace jscc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SourceRel {
  double value;
  double rho;  // maximizer of rho R - t Es(rho); inf sentinel at the band top
};

// t e(R/t) together with the maximizing rho.
SourceRel source_term(const DiscreteSource& src, double t, double rate) {
  const double r = rate / t;
  const double h = entropy(src);
  const double log_v = std::log(static_cast<double>(src.alphabet_size()));
  if (r <= h) return {0.0, 0.0};
  const double e = source_reliability(src, r);
  if (std::isinf(e)) return {kInf, kInf};
  if (r >= log_v) return {t * e, kInf};
  double hi = 1.0;
  while (gallager_source_fn_deriv(src, hi) < r && hi < 1e12) hi *= 2.0;
  const double rho = bisect(
      [&](double x) { return gallager_source_fn_deriv(src, x) - r; }, 0.0, hi);
  return {t * e, rho};
}

// Inner maxima of the relaxed bound against a generic E0 evaluator.
struct InnerMax {
  double value;
  double rho;
};

InnerMax channel_source_term(const std::function<double(double)>& e0_fn,
                             const DiscreteSource& src, double t,
                             double delta) {
  const ScalarMax m = golden_max(
      [&](double rho) {
        return e0_fn(rho) - t * gallager_source_fn(src, rho) - rho * delta;
      },
      0.0, 1.0);
  if (m.fx <= 0.0) return {0.0, 0.0};
  return {m.fx, m.x};
}

InnerMax channel_term(const std::function<double(double)>& e0_fn, double rate) {
  const ScalarMax m =
      golden_max([&](double rho) { return e0_fn(rho) - rho * rate; }, 0.0, 1.0);
  if (m.fx <= 0.0) return {0.0, 0.0};
  return {m.fx, m.x};
}

// Line search for the outer rate optimizations. Their objectives are
// min-of-terms surfaces clipped at zero, so far from the peak they are flat;
// plain golden section can tie on the plateau and walk away from the peak.
// A coarse scan brackets the maximum first.
ScalarMax scan_golden_max(const std::function<double(double)>& f, double a,
                          double b) {
  if (b <= a) return {a, f(a), 0};
  const int grid = 64;
  int best_i = 0;
  double best_v = -kInf;
  for (int i = 0; i <= grid; ++i) {
    const double v = f(a + (b - a) * i / grid);
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
  const double lo = a + (b - a) * std::max(0, best_i - 1) / grid;
  const double hi = a + (b - a) * std::min(grid, best_i + 1) / grid;
  const ScalarMax m = golden_max(f, lo, hi);
  if (best_v > m.fx) return {a + (b - a) * best_i / grid, best_v, m.iterations};
  return m;
}

double capacity_proxy(const ChannelSpec& ch) {
  if (ch.is_symmetric_binary()) {
    return mutual_information(ch, InputDistribution::uniform(2));
  }
  return std::log(static_cast<double>(ch.input_count()));
}

ExponentResult thm2_terms(const DiscreteSource& src,
                          const std::function<double(double)>& e0_fn,
                          double t, int num_classes, double rate_lo,
                          double rate_hi) {
  const double delta = (rate_hi - rate_lo) / static_cast<double>(num_classes - 1);
  const SourceRel t1 = source_term(src, t, rate_hi);
  const InnerMax t2 = channel_source_term(e0_fn, src, t, delta);
  const InnerMax t3 = channel_term(e0_fn, rate_lo);

  ExponentResult res;
  res.term_values = {t1.value, t2.value, t3.value};
  res.rhos = {t1.rho, t2.rho, t3.rho};
  res.active_term = 0;
  res.value = t1.value;
  if (t2.value < res.value) {
    res.value = t2.value;
    res.active_term = 1;
  }
  if (t3.value < res.value) {
    res.value = t3.value;
    res.active_term = 2;
  }
  res.rate_lo = rate_lo;
  res.rate_hi = rate_hi;
  res.rates.reserve(num_classes);
  for (int i = 1; i <= num_classes; ++i) {
    res.rates.push_back(rate_lo + (i - 1) * delta);
  }
  return res;
}

}  // namespace

ExponentResult thm1_exponent(const DiscreteSource& src, const ChannelSpec& ch,
                             const SourceChannelRatio& t,
                             const std::vector<double>& rates,
                             const std::vector<InputDistribution>& dists) {
  const int n = static_cast<int>(rates.size());
  if (n < 1) throw std::invalid_argument("thm1: need N >= 1 rates");
  if (static_cast<int>(dists.size()) != n) {
    throw std::invalid_argument("thm1: one input distribution per coded class");
  }
  for (int i = 1; i < n; ++i) {
    if (rates[i] > rates[i - 1] + 1e-12) {
      throw std::invalid_argument("thm1: rates must be nonincreasing");
    }
  }
  ExponentResult res;
  res.rates = rates;
  res.term_values.resize(n + 1);
  res.rhos.assign(n + 1, 0.0);

  // i = 0: Er(R_0, Q_0) = 0, source term at R_1
  const SourceRel s0 = source_term(src, t.t, rates[0]);
  res.term_values[0] = s0.value;
  res.rhos[0] = s0.rho;
  for (int i = 1; i <= n; ++i) {
    const double next_rate = i < n ? rates[i] : 0.0;  // R_{N+1} = 0
    const ScalarMax m = golden_max(
        [&](double rho) {
          return e0(ch, dists[i - 1], rho) - rho * rates[i - 1];
        },
        0.0, 1.0);
    const double er = std::max(0.0, m.fx);
    res.term_values[i] = er + source_term(src, t.t, next_rate).value;
    res.rhos[i] = er > 0.0 ? m.x : 0.0;
  }
  res.active_term = 0;
  res.value = res.term_values[0];
  for (int i = 1; i <= n; ++i) {
    if (res.term_values[i] < res.value) {
      res.value = res.term_values[i];
      res.active_term = i;
    }
  }
  return res;
}

ExponentResult thm2_exponent(const DiscreteSource& src, const ChannelSpec& ch,
                             const SourceChannelRatio& t, int num_classes,
                             double rate_lo, double rate_hi) {
  if (num_classes < 2) throw std::invalid_argument("thm2: need N >= 2");
  if (rate_lo < 0.0 || rate_hi < rate_lo) {
    throw std::invalid_argument("thm2: need R' >= R >= 0");
  }
  return thm2_terms(
      src, [&](double rho) { return e0_max(ch, rho); }, t.t, num_classes,
      rate_lo, rate_hi);
}

ExponentResult optimize_thm2(const DiscreteSource& src, const ChannelSpec& ch,
                             const SourceChannelRatio& t, int num_classes) {
  if (num_classes < 2) throw std::invalid_argument("thm2: need N >= 2");
  const E0Table table(ch);
  auto e0_fn = [&](double rho) { return table(rho); };
  const double cap = capacity_proxy(ch);
  const double log_v = std::log(static_cast<double>(src.alphabet_size()));
  const double r_hi_max = t.t * log_v + cap;
  const double r_lo_max = std::min(cap + 1e-3, r_hi_max);

  auto objective = [&](double r, double rp) {
    return thm2_terms(src, e0_fn, t.t, num_classes, r, rp).value;
  };

  // pre-scan: T1/T3 tabulated on the axes, T2 on a delta grid
  const int grid = 400;
  std::vector<double> r_axis(grid + 1), rp_axis(grid + 1);
  std::vector<double> t3_axis(grid + 1), t1_axis(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    r_axis[i] = r_lo_max * i / grid;
    rp_axis[i] = r_hi_max * i / grid;
    t3_axis[i] = channel_term(e0_fn, r_axis[i]).value;
    t1_axis[i] = source_term(src, t.t, rp_axis[i]).value;
  }
  const int dgrid = 2000;
  const double delta_max = r_hi_max / static_cast<double>(num_classes - 1);
  std::vector<double> t2_axis(dgrid + 1);
  for (int i = 0; i <= dgrid; ++i) {
    t2_axis[i] =
        channel_source_term(e0_fn, src, t.t, delta_max * i / dgrid).value;
  }
  auto t2_interp = [&](double delta) {
    const double f = std::min(delta / delta_max, 1.0) * dgrid;
    const int i = std::min(static_cast<int>(f), dgrid - 1);
    const double u = f - i;
    return t2_axis[i] + u * (t2_axis[i + 1] - t2_axis[i]);
  };

  double best = -1.0, best_r = 0.0, best_rp = 0.0;
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; j <= grid; ++j) {
      if (rp_axis[j] < r_axis[i]) continue;
      const double delta =
          (rp_axis[j] - r_axis[i]) / static_cast<double>(num_classes - 1);
      const double v =
          std::min({t1_axis[j], t2_interp(delta), t3_axis[i]});
      if (v > best) {
        best = v;
        best_r = r_axis[i];
        best_rp = rp_axis[j];
      }
    }
  }

  // refine with coordinate and diagonal golden-section passes; the
  // coordinate slices of the min-of-three objective are unimodal and the
  // diagonal direction unlocks ridge points where two terms tie
  double r = best_r, rp = best_rp;
  double val = objective(r, rp);
  int sweeps = 0;
  for (; sweeps < 100; ++sweeps) {
    const double before = val;
    ScalarMax m = scan_golden_max([&](double x) { return objective(r, x); },
                             r, r_hi_max);
    if (m.fx > val) {
      rp = m.x;
      val = m.fx;
    }
    m = scan_golden_max([&](double x) { return objective(x, rp); }, 0.0,
                   std::min(rp, r_lo_max));
    if (m.fx > val) {
      r = m.x;
      val = m.fx;
    }
    const double s_lo = -r;
    const double s_hi = r_hi_max - rp;
    m = scan_golden_max([&](double s) { return objective(r + s, rp + s); }, s_lo,
                   s_hi);
    if (m.fx > val) {
      r += m.x;
      rp += m.x;
      val = m.fx;
    }
    if (val - before < 1e-10) break;
  }

  // exact re-evaluation at the reported argmax
  ExponentResult res = thm2_exponent(src, ch, t, num_classes, r, rp);
  res.iterations = sweeps;
  return res;
}

ExponentResult optimize_thm1(const DiscreteSource& src, const ChannelSpec& ch,
                             const SourceChannelRatio& t, int num_classes) {
  if (num_classes < 1) throw std::invalid_argument("thm1: need N >= 1");
  const E0Table table(ch);
  auto e0_fn = [&](double rho) { return table(rho); };
  const double cap = capacity_proxy(ch);
  const double log_v = std::log(static_cast<double>(src.alphabet_size()));
  const double r1_cap = t.t * log_v + cap;

  // rates descending: rates[0] = R_1 >= ... >= rates[N-1] = R_N
  auto objective = [&](const std::vector<double>& rates) {
    double m = source_term(src, t.t, rates[0]).value;
    for (int i = 0; i < num_classes; ++i) {
      const double next = i + 1 < num_classes ? rates[i + 1] : 0.0;
      const double term = channel_term(e0_fn, rates[i]).value +
                          source_term(src, t.t, next).value;
      m = std::min(m, term);
    }
    return m;
  };

  std::vector<std::vector<double>> starts;
  {
    const ExponentResult sep = separate_exponent(src, ch, t);
    starts.emplace_back(num_classes, sep.rate_lo);
  }
  if (num_classes >= 2) {
    const ExponentResult t2 = optimize_thm2(src, ch, t, num_classes);
    std::vector<double> s(t2.rates.rbegin(), t2.rates.rend());
    starts.push_back(std::move(s));
  }
  // equal-terms start: at the typical interior optimum all N+1 terms tie,
  // so the whole rate vector follows from a single value equalization
  // (coordinate descent alone can stall on the skew ridge where they meet)
  {
    auto er_of = [&](double r) { return channel_term(e0_fn, r).value; };
    auto er_inv = [&](double need) {
      need = std::max(need, 1e-12);
      if (er_of(0.0) <= need) return 0.0;
      if (er_of(r1_cap) >= need) return r1_cap;
      return bisect([&](double r) { return er_of(r) - need; }, 0.0, r1_cap);
    };
    auto rates_for = [&](double v) {
      std::vector<double> r(num_classes);
      r[num_classes - 1] = er_inv(v);
      for (int i = num_classes - 2; i >= 0; --i) {
        r[i] = er_inv(v - source_term(src, t.t, r[i + 1]).value);
      }
      return r;
    };
    auto top_gap = [&](double v) {
      return source_term(src, t.t, rates_for(v)[0]).value - v;
    };
    const double v_hi = er_of(0.0);
    if (v_hi > 1e-10 && top_gap(1e-10) > 0.0 && top_gap(v_hi) < 0.0) {
      const double v_star =
          bisect([&](double v) { return top_gap(v); }, 1e-10, v_hi);
      starts.push_back(rates_for(v_star));
    }
  }

  std::vector<double> best_rates;
  double best = -1.0;
  int total_sweeps = 0;
  for (auto rates : starts) {
    double val = objective(rates);
    for (int sweep = 0; sweep < 300; ++sweep) {
      const double before = val;
      for (int j = 0; j < num_classes; ++j) {
        const double lo = j + 1 < num_classes ? rates[j + 1] : 0.0;
        const double hi = j > 0 ? rates[j - 1] : r1_cap;
        const ScalarMax m = scan_golden_max(
            [&](double x) {
              std::vector<double> cand = rates;
              cand[j] = x;
              return objective(cand);
            },
            lo, hi);
        if (m.fx > val) {
          rates[j] = m.x;
          val = m.fx;
        }
      }
      // opposite-direction moves for adjacent pairs: ridge points where two
      // terms tie need R_j and R_{j+1} to move against each other
      for (int j = 0; j + 1 < num_classes; ++j) {
        const double hi_j = j > 0 ? rates[j - 1] : r1_cap;
        const double lo_next = j + 2 < num_classes ? rates[j + 2] : 0.0;
        const double s_min = -0.5 * (rates[j] - rates[j + 1]);
        const double s_max =
            std::min(hi_j - rates[j], rates[j + 1] - lo_next);
        if (s_max <= s_min) continue;
        const ScalarMax mp = scan_golden_max(
            [&](double s) {
              std::vector<double> cand = rates;
              cand[j] += s;
              cand[j + 1] -= s;
              return objective(cand);
            },
            s_min, s_max);
        if (mp.fx > val) {
          rates[j] += mp.x;
          rates[j + 1] -= mp.x;
          val = mp.fx;
        }
      }
      // global shift direction across the ridge
      const double s_lo = -rates[num_classes - 1];
      const double s_hi = r1_cap - rates[0];
      const ScalarMax m = scan_golden_max(
          [&](double s) {
            std::vector<double> cand = rates;
            for (double& x : cand) x += s;
            return objective(cand);
          },
          s_lo, s_hi);
      if (m.fx > val) {
        for (double& x : rates) x += m.x;
        val = m.fx;
      }
      ++total_sweeps;
      if (val - before < 1e-9) break;
    }
    if (val > best) {
      best = val;
      best_rates = rates;
    }
  }

  // exact re-evaluation with per-class uniform inputs
  std::vector<InputDistribution> dists(
      num_classes, InputDistribution::uniform(ch.input_count()));
  ExponentResult res = thm1_exponent(src, ch, t, best_rates, dists);
  res.iterations = total_sweeps;
  return res;
}

ExponentResult separate_exponent(const DiscreteSource& src,
                                 const ChannelSpec& ch,
                                 const SourceChannelRatio& t) {
  auto e0_fn = [&](double rho) { return e0_max(ch, rho); };
  auto er = [&](double r) { return channel_term(e0_fn, r).value; };
  auto es = [&](double r) { return source_term(src, t.t, r).value; };

  const double h = entropy(src);
  const double log_v = std::log(static_cast<double>(src.alphabet_size()));
  const double r_lo = t.t * h;
  const double r_hi = t.t * log_v;

  ExponentResult res;
  if (er(r_lo) <= 1e-14) {
    // channel cannot support the entropy rate: exponent 0
    res.value = 0.0;
    res.rate_lo = res.rate_hi = r_lo;
    res.term_values = {0.0, 0.0};
    res.active_term = 0;
    return res;
  }
  double r_star;
  if (er(r_hi) > es(r_hi)) {
    // the channel term still dominates at the top of the source band
    r_star = r_hi;
    res.value = er(r_hi);
    res.active_term = 0;
  } else {
    r_star = bisect([&](double r) { return er(r) - es(r); }, r_lo, r_hi);
    const double a = er(r_star);
    const double b = es(r_star);
    res.value = std::min(a, b);
    res.active_term = a <= b ? 0 : 1;
  }
  res.term_values = {er(r_star), es(r_star)};
  res.rate_lo = res.rate_hi = r_star;
  res.rates = {r_star};
  return res;
}

ExponentResult joint_exponent(const DiscreteSource& src, const ChannelSpec& ch,
                              const SourceChannelRatio& t) {
  const ScalarMax m = golden_max(
      [&](double rho) {
        return e0_max(ch, rho) - t.t * gallager_source_fn(src, rho);
      },
      0.0, 1.0);
  ExponentResult res;
  res.value = std::max(0.0, m.fx);
  res.rhos = {res.value > 0.0 ? m.x : 0.0};
  res.term_values = {res.value};
  res.active_term = 0;
  res.iterations = m.iterations;
  return res;
}

ExponentResult joint_hull_from_e0(const DiscreteSource& src,
                                  const SourceChannelRatio& t,
                                  const std::function<double(double)>& e0_fn) {
  // right side: concave hull of E0 against the source function
  const ConcaveHullTable hull(e0_fn);
  const std::function<double(double)> hull_fn = [&](double rho) {
    return hull(rho);
  };
  const ScalarMax right = golden_max(
      [&](double rho) {
        return hull(rho) - t.t * gallager_source_fn(src, rho);
      },
      0.0, 1.0);
  const double right_val = std::max(0.0, right.fx);

  // left side: min_R { Er(R) + t e(R/t) }, convex in R. Er is the Legendre
  // transform of E0, which only sees the hull; evaluating it through the
  // hull keeps the inner maximization unimodal when E0 is non-concave.
  const double r_hi = t.t * std::log(static_cast<double>(src.alphabet_size()));
  auto f = [&](double r) {
    return channel_term(hull_fn, r).value + source_term(src, t.t, r).value;
  };
  const int grid = 2001;
  double best_r = 0.0;
  double best_f = kInf;
  for (int i = 0; i < grid; ++i) {
    const double r = r_hi * i / (grid - 1);
    const double v = f(r);
    if (v < best_f) {
      best_f = v;
      best_r = r;
    }
  }
  const double h = r_hi / (grid - 1);
  const ScalarMax refine =
      golden_max([&](double r) { return -f(r); },
                 std::max(0.0, best_r - h), std::min(r_hi, best_r + h));
  const double left_val = std::min(best_f, -refine.fx);

  if (std::fabs(left_val - right_val) > 1e-5) {
    throw std::runtime_error(
        "joint_hull_exponent: primal/dual disagreement beyond 1e-5");
  }
  ExponentResult res;
  res.value = right_val;
  res.term_values = {left_val, right_val};
  res.rhos = {right.x};
  res.rates = {best_r};
  res.active_term = 1;
  return res;
}

ExponentResult joint_hull_exponent(const DiscreteSource& src,
                                   const ChannelSpec& ch,
                                   const SourceChannelRatio& t) {
  const E0Table table(ch);
  return joint_hull_from_e0(src, t, [&](double rho) { return table(rho); });
}

}  // namespace jscc
