#include "jscc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace jscc {

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::invalid_argument("bisect: no sign change on bracket");
  }
  for (int i = 0; i < max_iter && hi - lo > xtol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ScalarMax golden_max(const std::function<double(double)>& f, double a, double b,
                     double xtol) {
  static const double inv_gr = (std::sqrt(5.0) - 1.0) / 2.0;  // 1/phi
  double c = b - inv_gr * (b - a);
  double d = a + inv_gr * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  while (b - a > xtol && it < kMaxIter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_gr * (b - a);
      fd = f(d);
    }
    ++it;
  }
  const double x = 0.5 * (a + b);
  return {x, f(x), it};
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa,
                double b, double fb, double m, double fm, double whole,
                double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = simpson(f, a, fa, b, fb, m, fm);
  return adaptive(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

double log_add(double a, double b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

double log_sum_exp(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (std::isinf(m) && m < 0) return m;
  double s = 0.0;
  for (double x : v) {
    if (!(std::isinf(x) && x < 0)) s += std::exp(x - m);
  }
  return m + std::log(s);
}

namespace {

// Eigenvalues of a symmetric tridiagonal matrix (QL with implicit shifts);
// d holds the diagonal on entry and the eigenvalues (ascending) on return,
// e the subdiagonal (e[i] couples d[i] and d[i+1]).
void tridiag_eigenvalues(std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  e.resize(n, 0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= 1e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 200) {
          throw std::runtime_error("tridiag_eigenvalues: no convergence");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && m - 1 >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
}

// Nodes and weights of the n-point Hermite rule: Golub-Welsch eigenvalues
// of the Jacobi matrix as initial guesses, polished by Newton on the
// orthonormal recurrence (with rescaling; stable to thousands of nodes).
GaussHermiteRule build_hermite(int n) {
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.log_weights.resize(n);
  const double pim4 = 0.7511255444649425;  // pi^{-1/4}

  std::vector<double> diag(n, 0.0);
  std::vector<double> off(n, 0.0);
  for (int j = 0; j < n - 1; ++j) off[j] = std::sqrt((j + 1) / 2.0);
  tridiag_eigenvalues(diag, off);

  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = diag[n - 1 - i];  // i-th largest root
    // The orthonormal-polynomial recurrence reaches e^{z^2/2} magnitudes
    // near the extreme roots; run it with adaptive rescaling and carry the
    // scale in log form. Newton's step p1/pp is scale-invariant.
    constexpr double kUp = 1e250;
    constexpr double kDown = 1e-250;
    const double log_up = std::log(kUp);
    double log_pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = pim4;
      double p2 = 0.0;
      double ls = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
        const double ap = std::max(std::fabs(p1), std::fabs(p2));
        if (ap > kUp) {
          p1 *= kDown;
          p2 *= kDown;
          ls += log_up;
        } else if (ap > 0.0 && ap < kDown) {
          p1 *= kUp;
          p2 *= kUp;
          ls -= log_up;
        }
      }
      const double pp_scaled = std::sqrt(2.0 * n) * p2;
      log_pp = std::log(std::fabs(pp_scaled)) + ls;
      const double dz = p1 / pp_scaled;
      z -= dz;
      if (std::fabs(dz) < 1e-15 * std::max(1.0, std::fabs(z))) break;
    }
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    const double lw = std::log(2.0) - 2.0 * log_pp;
    const double w = std::exp(lw);  // may underflow at extreme nodes
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
    rule.log_weights[i] = lw;
    rule.log_weights[n - 1 - i] = lw;
  }
  // largest nodes first; sort ascending for predictable iteration
  std::vector<std::size_t> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return rule.nodes[a] < rule.nodes[b];
  });
  GaussHermiteRule sorted;
  sorted.nodes.reserve(n);
  sorted.weights.reserve(n);
  sorted.log_weights.reserve(n);
  for (std::size_t j : idx) {
    sorted.nodes.push_back(rule.nodes[j]);
    sorted.weights.push_back(rule.weights[j]);
    sorted.log_weights.push_back(rule.log_weights[j]);
  }
  return sorted;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int n) {
  static std::mutex mu;
  static std::map<int, GaussHermiteRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, build_hermite(n)).first;
  }
  return it->second;
}

WilsonInterval wilson_interval(std::uint64_t errors, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;  // 97.5% quantile
  const double nt = static_cast<double>(trials);
  const double phat = static_cast<double>(errors) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (phat + z2 / (2.0 * nt)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / nt + z2 / (4.0 * nt * nt)) / denom;
  // the zero- and all-error edges are exact; avoid rounding residue there
  const double lo = errors == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = errors == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

namespace {

std::uint64_t splitmix_step(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SplitMix64::SplitMix64(std::uint64_t seed, std::uint64_t stream) {
  // Derive a stream-specific state so per-trial substreams are independent
  // of how trials are batched across workers.
  std::uint64_t s = seed;
  std::uint64_t a = splitmix_step(s);
  s = a ^ (stream * 0xda942042e4dd58b5ULL + 0x9e3779b97f4a7c15ULL);
  (void)splitmix_step(s);
  state_ = s;
}

std::uint64_t SplitMix64::next() { return splitmix_step(state_); }

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

}  // namespace jscc
