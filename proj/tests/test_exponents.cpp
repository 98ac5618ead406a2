#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "jscc/channel.hpp"
#include "jscc/exponents.hpp"
#include "jscc/numerics.hpp"
#include "jscc/source.hpp"

using namespace jscc;

namespace {

const DiscreteSource kSrc = DiscreteSource::binary(0.1);
const SourceChannelRatio kT(1.0);

ChannelSpec channel_at_db(double ebn0_db) {
  return ChannelSpec::bi_awgn(ebn0_to_esn0(ebn0_db, kT, kSrc));
}

}  // namespace

TEST_CASE("thm1_exponent equals term-by-term recomputation") {
  const ChannelSpec ch = channel_at_db(4.0);
  const InputDistribution u = InputDistribution::uniform(2);
  const std::vector<double> rates = {0.6, 0.4};
  const ExponentResult r =
      thm1_exponent(kSrc, ch, kT, rates, {u, u});
  REQUIRE(r.term_values.size() == 3);  // terms i = 0..N
  const double t0 = 0.0 + kT.t * source_reliability(kSrc, rates[0] / kT.t);
  const double t1 = random_coding_exponent(ch, u, rates[0]) +
                    kT.t * source_reliability(kSrc, rates[1] / kT.t);
  const double t2 = random_coding_exponent(ch, u, rates[1]) + 0.0;
  CHECK(r.term_values[0] == doctest::Approx(t0).epsilon(1e-10));
  CHECK(r.term_values[1] == doctest::Approx(t1).epsilon(1e-10));
  CHECK(r.term_values[2] == doctest::Approx(t2).epsilon(1e-10));
  CHECK(r.value ==
        doctest::Approx(std::min({t0, t1, t2})).epsilon(1e-12));
  CHECK(r.term_values[r.active_term] == doctest::Approx(r.value));
}

TEST_CASE("thm1_exponent extreme rate stays nonnegative") {
  const ChannelSpec ch = channel_at_db(4.0);
  const InputDistribution u = InputDistribution::uniform(2);
  const double top = kT.t * std::log(2.0);
  const ExponentResult r = thm1_exponent(kSrc, ch, kT, {top}, {u});
  CHECK(r.value >= 0.0);
}

TEST_CASE("optimize_thm1: N=1 recovers the separate exponent") {
  for (double db : {2.0, 4.0, 6.0}) {
    const ChannelSpec ch = channel_at_db(db);
    const double sep = separate_exponent(kSrc, ch, kT).value;
    CHECK(optimize_thm1(kSrc, ch, kT, 1).value ==
          doctest::Approx(sep).epsilon(1e-8));
  }
}

TEST_CASE("optimize_thm1 dominates and tracks optimize_thm2 for N = 2, 3") {
  for (double db : {2.0, 4.0, 6.0}) {
    const ChannelSpec ch = channel_at_db(db);
    for (int n : {2, 3}) {
      const double a = optimize_thm1(kSrc, ch, kT, n).value;
      const double b = optimize_thm2(kSrc, ch, kT, n).value;
      // the relaxation constrains the rates to an arithmetic schedule, so it
      // can only lose value; at small N it stays within a few percent
      CHECK(a >= b - 1e-9);
      CHECK(a - b < 0.05 * a);
    }
  }
}

TEST_CASE("optimize_thm1 N=2 matches a 200x200 rate-grid brute force") {
  const ChannelSpec ch = channel_at_db(4.0);
  const InputDistribution u = InputDistribution::uniform(2);
  const double hi = kT.t * std::log(2.0);
  double grid_best = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double r1 = hi * (i + 0.5) / 200.0;
    for (int j = 0; j <= i; ++j) {
      const double r2 = hi * (j + 0.5) / 200.0;
      grid_best = std::max(
          grid_best, thm1_exponent(kSrc, ch, kT, {r1, r2}, {u, u}).value);
    }
  }
  const double opt = optimize_thm1(kSrc, ch, kT, 2).value;
  CHECK(opt >= grid_best - 1e-9);
  CHECK(std::fabs(opt - grid_best) < 1e-4);
}

TEST_CASE("thm2_exponent collapses at the rate extremes") {
  const ChannelSpec ch = channel_at_db(3.0);
  const InputDistribution u = InputDistribution::uniform(2);
  // R = R': the second term is the joint exponent
  const double joint = joint_exponent(kSrc, ch, kT).value;
  const ExponentResult eq = thm2_exponent(kSrc, ch, kT, 2, 0.35, 0.35);
  CHECK(eq.term_values[1] == doctest::Approx(joint).epsilon(1e-8));
  // R = 0: the third term is E0(1)
  const ExponentResult z = thm2_exponent(kSrc, ch, kT, 2, 0.0, 0.35);
  CHECK(z.term_values[2] == doctest::Approx(e0(ch, u, 1.0)).epsilon(1e-9));
}

TEST_CASE("thm2_exponent matches a dense rho-grid brute force") {
  const ChannelSpec ch = channel_at_db(3.0);
  const InputDistribution u = InputDistribution::uniform(2);
  const int n = 2;
  const double rate_lo = 0.33, rate_hi = 0.36;
  const ExponentResult r = thm2_exponent(kSrc, ch, kT, n, rate_lo, rate_hi);
  const double t1 = kT.t * source_reliability(kSrc, rate_hi / kT.t);
  double t2 = -1e300, t3 = -1e300;
  for (int i = 0; i <= 400000; ++i) {
    const double rho = i / 400000.0;
    const double e = e0(ch, u, rho);
    t2 = std::max(t2, e - kT.t * gallager_source_fn(kSrc, rho) -
                          rho * (rate_hi - rate_lo) / (n - 1));
    t3 = std::max(t3, e - rho * rate_lo);
  }
  CHECK(r.term_values[0] == doctest::Approx(t1).epsilon(1e-10));
  CHECK(r.term_values[1] == doctest::Approx(t2).epsilon(1e-8));
  CHECK(r.term_values[2] == doctest::Approx(t3).epsilon(1e-8));
  CHECK(r.value == doctest::Approx(std::min({t1, t2, t3})).epsilon(1e-8));
}

TEST_CASE("optimize_thm2 argmax re-evaluates and is locally optimal") {
  const ChannelSpec ch = channel_at_db(4.0);
  const ExponentResult r = optimize_thm2(kSrc, ch, kT, 3);
  const double re =
      thm2_exponent(kSrc, ch, kT, 3, r.rate_lo, r.rate_hi).value;
  CHECK(re == doctest::Approx(r.value).epsilon(1e-8));
  // arithmetic rate schedule
  REQUIRE(r.rates.size() == 3);
  const double delta = (r.rate_hi - r.rate_lo) / 2.0;
  CHECK(r.rates[0] == doctest::Approx(r.rate_lo));
  CHECK(r.rates[1] == doctest::Approx(r.rate_lo + delta).epsilon(1e-10));
  CHECK(r.rates[2] == doctest::Approx(r.rate_hi));
  // no nearby pair improves
  for (double da : {-3e-3, 0.0, 3e-3}) {
    for (double db : {-3e-3, 0.0, 3e-3}) {
      const double lo = std::max(0.0, r.rate_lo + da);
      const double hi = std::max(lo, r.rate_hi + db);
      CHECK(thm2_exponent(kSrc, ch, kT, 3, lo, hi).value <= r.value + 1e-7);
    }
  }
}

TEST_CASE("separate_exponent special cases and grid oracle") {
  // entropy above capacity: exponent 0
  const ChannelSpec weak = ChannelSpec::bi_awgn(0.05);
  CHECK(separate_exponent(kSrc, weak, kT).value == doctest::Approx(0.0));
  // incompressible source: equals Er(ln 2)
  const DiscreteSource fair = DiscreteSource::binary(0.5);
  const ChannelSpec ch = channel_at_db(4.0);
  const InputDistribution u = InputDistribution::uniform(2);
  CHECK(separate_exponent(fair, ch, kT).value ==
        doctest::Approx(random_coding_exponent(ch, u, std::log(2.0)))
            .epsilon(1e-8));
  // 10^4-point R-grid brute force
  const ExponentResult sep = separate_exponent(kSrc, ch, kT);
  double grid_best = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double r = std::log(2.0) * i / 10000.0;
    const double er = random_coding_exponent(ch, u, r);
    const double se = kT.t * source_reliability(kSrc, std::min(r / kT.t,
                                                               std::log(2.0)));
    grid_best = std::max(grid_best, std::min(er, se));
  }
  // the true maximum sits between grid nodes; the gap is bounded by the
  // node spacing times the slopes of the two sides
  CHECK(sep.value >= grid_best - 1e-9);
  CHECK(sep.value - grid_best < 1e-4);
}

TEST_CASE("joint_exponent special cases and grid oracle") {
  const ChannelSpec weak = ChannelSpec::bi_awgn(0.05);
  const ExponentResult zero = joint_exponent(kSrc, weak, kT);
  CHECK(zero.value == doctest::Approx(0.0));
  CHECK(zero.rhos[0] == doctest::Approx(0.0).epsilon(1e-4));
  const ChannelSpec ch = channel_at_db(4.0);
  const DiscreteSource fair = DiscreteSource::binary(0.5);
  CHECK(joint_exponent(fair, ch, kT).value ==
        doctest::Approx(separate_exponent(fair, ch, kT).value).epsilon(1e-8));
  // dense grid at 2 dB
  const ChannelSpec ch2 = channel_at_db(2.0);
  const InputDistribution u = InputDistribution::uniform(2);
  double grid_best = 0.0;
  for (int i = 0; i <= 200000; ++i) {
    const double rho = i / 200000.0;
    grid_best = std::max(
        grid_best, e0(ch2, u, rho) - kT.t * gallager_source_fn(kSrc, rho));
  }
  CHECK(joint_exponent(kSrc, ch2, kT).value ==
        doctest::Approx(grid_best).epsilon(1e-8));
}

TEST_CASE("joint_hull_exponent agrees with the joint exponent on BiAwgn") {
  for (double db : {2.0, 4.0, 6.0}) {
    const ChannelSpec ch = channel_at_db(db);
    CHECK(std::fabs(joint_hull_exponent(kSrc, ch, kT).value -
                    joint_exponent(kSrc, ch, kT).value) < 1e-6);
  }
  const DiscreteSource fair = DiscreteSource::binary(0.5);
  const ChannelSpec ch = channel_at_db(4.0);
  CHECK(joint_hull_exponent(fair, ch, kT).value ==
        doctest::Approx(separate_exponent(fair, ch, kT).value).epsilon(1e-6));
}

TEST_CASE("hull duality holds for a synthetic non-concave E0 curve") {
  // two-branch mixture: pointwise max of two concave curves is non-concave
  auto branch_a = [](double rho) { return 0.50 * rho / (1.0 + 2.5 * rho); };
  auto branch_b = [](double rho) { return 0.28 * rho; };
  auto e0_fn = [&](double rho) {
    return std::max(branch_a(rho), branch_b(rho));
  };
  // confirm non-concavity of the input
  bool nonconcave = false;
  for (double rho = 0.05; rho < 1.0; rho += 0.01) {
    if (e0_fn(rho) < 0.5 * (e0_fn(rho - 0.05) + e0_fn(rho + 0.0499)) - 1e-9) {
      nonconcave = true;
    }
  }
  CHECK(nonconcave);
  // the evaluator computes both sides of the duality and throws if they
  // disagree beyond 1e-5 — not throwing is the cross-check
  const ExponentResult r = joint_hull_from_e0(kSrc, kT, e0_fn);
  CHECK(r.value > 0.0);
  // independent left-side oracle: min_R { Er(R) + t e(R/t) } on a fine grid
  double left = 1e300;
  for (int i = 0; i <= 20000; ++i) {
    const double rate = std::log(2.0) * i / 20000.0;
    double er = 0.0;
    for (int j = 0; j <= 2000; ++j) {
      const double rho = j / 2000.0;
      er = std::max(er, e0_fn(rho) - rho * rate);
    }
    left = std::min(
        left, er + kT.t * source_reliability(
                       kSrc, std::min(rate / kT.t, std::log(2.0))));
  }
  CHECK(r.value == doctest::Approx(left).epsilon(2e-4));
}

TEST_CASE("exponent ordering and SNR monotonicity at spot points") {
  const ChannelSpec a = channel_at_db(3.0);
  const ChannelSpec b = channel_at_db(5.0);
  const double sep = separate_exponent(kSrc, a, kT).value;
  const double n2 = optimize_thm2(kSrc, a, kT, 2).value;
  const double n3 = optimize_thm2(kSrc, a, kT, 3).value;
  const double joint = joint_exponent(kSrc, a, kT).value;
  CHECK(sep <= n2 + 1e-6);
  CHECK(n2 <= n3 + 1e-6);
  CHECK(n3 <= joint + 1e-6);
  CHECK(joint_exponent(kSrc, b, kT).value > joint);
  // nonincreasing in source entropy
  CHECK(joint_exponent(DiscreteSource::binary(0.2), a, kT).value < joint);
}
