#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "jot/diagnostics.hpp"
#include "jot/levy.hpp"
#include "jot/measures.hpp"
#include "jot/posterior.hpp"
#include "jot/quad.hpp"
#include "jot/rng.hpp"
#include "jot/special.hpp"

using namespace jot;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("scaling law: fixed and transformed-distribution draws") {
  CHECK_THROWS_AS(ScalingLaw::fixed(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ScalingLaw::distribution(Dist::gamma, {1.0, 1.0}, 0.0),
                  std::invalid_argument);
  const auto si = LevyDensity::scale_invariant(1.0);
  RngStream rng(3);
  CHECK(ScalingLaw::fixed(0.7).sample(si, rng) == 0.7);

  // a = g^{-2} with g ~ Gamma(6, 2): E[a] = 4/(5*4), E[a^2] = 16/(5*4*3*2)
  const auto law = ScalingLaw::distribution(Dist::gamma, {6.0, 2.0}, -2.0);
  const int n = 200000;
  double m1 = 0, m2 = 0;
  for (int i = 0; i < n; ++i) {
    const double a = law.sample(si, rng);
    m1 += a;
    m2 += a * a;
  }
  CHECK(m1 / n == doctest::Approx(0.2).epsilon(0.01));
  CHECK(m2 / n == doctest::Approx(16.0 / 120.0).epsilon(0.03));

  // change-of-variables density normalizes and matches tail probabilities
  auto dens = scaling_law_density(law, si);
  CHECK(quad(dens, 0.0, kInf, 1e-10) == doctest::Approx(1.0).epsilon(1e-8));
  // P(a <= 1) = P(g >= 1)
  CHECK(quad(dens, 0.0, 1.0, 1e-10) ==
        doctest::Approx(gamma_q(6.0, 2.0)).epsilon(1e-8));
  CHECK_THROWS_AS(scaling_law_density(ScalingLaw::fixed(1.0), si),
                  std::invalid_argument);
}

TEST_CASE("scale-invariant weights do not depend on the scaling value") {
  RngStream rng(17);
  const auto si = LevyDensity::scale_invariant(1.0);
  std::vector<double> at_half, at_two, first;
  for (int rep = 0; rep < 4000; ++rep) {
    auto m1 = sample_jot(si, ScalingLaw::fixed(0.5),
                         TruncationRule::fixed_count(3), rng);
    auto m2 = sample_jot(si, ScalingLaw::fixed(0.9),
                         TruncationRule::fixed_count(3), rng);
    at_half.push_back(m1.weights[0]);
    at_two.push_back(m2.weights[0]);
    first.push_back(m1.weights[0]);
    CHECK(m1.delta_ref == 0.5);
    CHECK(m1.weights[0] < 1.0);
    CHECK(m1.weights[2] < m1.weights[1]);
  }
  CHECK(ks_two_sample(at_half, at_two).p_value > 0.01);
  // first weight is e^{-E} ~ Uniform(0,1) at theta = 1
  CHECK(ks_one_sample(first, [](double x) { return x; }).p_value > 0.01);
}

TEST_CASE("stable weights under a gamma prior on the scaling power") {
  // with zeta = a^{-alpha} ~ Gamma((theta+alpha)/alpha, c/alpha) the
  // successive weight ratios are independent Beta(theta + alpha k, 1)
  RngStream rng(29);
  const double c = 1.0, alpha = 0.5, theta = 1.0;
  const auto st = LevyDensity::stable(c, alpha);
  const auto prior = ScalingLaw::distribution(
      Dist::gamma, {(theta + alpha) / alpha, c / alpha}, -1.0 / alpha);
  std::vector<std::vector<double>> ratios(3);
  for (int rep = 0; rep < 20000; ++rep) {
    auto m = sample_jot(st, prior, TruncationRule::fixed_count(3), rng);
    REQUIRE(m.weights.size() == 3);
    double prev = 1.0;
    for (int k = 0; k < 3; ++k) {
      ratios[k].push_back(m.weights[k] / prev);
      prev = m.weights[k];
    }
  }
  for (int k = 0; k < 3; ++k) {
    const double b = theta + alpha * (k + 1);
    auto ks = ks_one_sample(ratios[k],
                            [b](double x) { return std::pow(x, b); });
    CHECK(ks.p_value > 0.01);
  }
}

TEST_CASE("conditional density identities") {
  const auto st = LevyDensity::stable(1.0, 0.5);
  const double a = 2.0;
  const auto cond = conditional_levy(st, a);
  CHECK(cond.support_hi() == 1.0);
  CHECK(cond.density(0.3) == doctest::Approx(a * st.density(a * 0.3)).epsilon(1e-12));
  CHECK(cond.has_closed_tail());
  CHECK(cond.tail(0.2) ==
        doctest::Approx(st.tail(a * 0.2) - st.tail(a)).epsilon(1e-12));
  const double t = cond.tail(0.4);
  CHECK(cond.inv_tail(t) == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(cond.tail(1.0) == doctest::Approx(0.0));

  // support shrinks when a exceeds part of a bounded support
  const auto bp = LevyDensity::beta_process(1.0, 0.5);
  const auto cbp = conditional_levy(bp, 2.0);
  CHECK(cbp.support_hi() == doctest::Approx(0.5));
  CHECK_THROWS_AS(conditional_levy(st, 0.0), std::invalid_argument);
}

TEST_CASE("scaled subordinator sampling") {
  const auto st = LevyDensity::stable(1.0, 0.5);
  RngStream a(4), b(4);
  CHECK_THROWS_AS(
      sample_scaled_levy(st, 1.0, TruncationRule::fixed_count(2), a),
      std::invalid_argument);
  CHECK_THROWS_AS(
      sample_scaled_levy(conditional_levy(st, 1.0), 0.0,
                         TruncationRule::fixed_count(2), a),
      std::invalid_argument);

  const auto cond = conditional_levy(st, 1.0);
  // zeta = 1 reproduces the plain ranked-jump stream
  auto m = sample_scaled_levy(cond, 1.0, TruncationRule::fixed_count(5), a);
  auto rj = sample_ranked_jumps(cond, 0.0, TruncationRule::fixed_count(5), b);
  REQUIRE(m.weights.size() == 5);
  for (int k = 0; k < 5; ++k)
    CHECK(m.weights[k] == doctest::Approx(rj.jumps[k]).epsilon(1e-14));
  CHECK(m.has_zeta);

  // expected number of weights above x is zeta * Lambda(x)
  RngStream rng(41);
  const double zeta = 2.5, x = 0.1;
  double count = 0;
  const int reps = 5000;
  for (int i = 0; i < reps; ++i) {
    auto mm = sample_scaled_levy(cond, zeta,
                                 TruncationRule::relative_floor(x, 1.0), rng);
    for (double w : mm.weights) count += (w >= x);
  }
  const double expect = zeta * cond.tail(x);
  CHECK(count / reps == doctest::Approx(expect).epsilon(0.03));
}

TEST_CASE("thinning weights") {
  RngStream rng(9);
  UnitaryMeasure m;
  m.weights = {0.8, 0.4, 0.2, 0.1};
  m.atoms = {0, 1, 2, 3};
  auto keep = thin(m, [](double) { return 1.0; }, rng);
  CHECK(keep.weights == m.weights);
  CHECK(keep.atoms == m.atoms);
  auto drop = thin(m, [](double) { return 0.0; }, rng);
  CHECK(drop.weights.empty());
  CHECK_THROWS_AS(thin(m, [](double) { return 1.5; }, rng),
                  std::invalid_argument);

  const auto bp = LevyDensity::beta_process(1.0, 0.5);
  auto th = thinned_levy(bp, [](double s) { return 1.0 - s; });
  CHECK(th.density(0.3) == doctest::Approx(0.7 * bp.density(0.3)).epsilon(1e-12));
}

TEST_CASE("mapped-and-thinned stable jumps follow the target intensity") {
  // s = x/(x+tau) applied to stable(c=alpha) jumps, thinned by (1-s)^theta,
  // has intensity alpha tau^-alpha s^{-1-alpha} (1-s)^{theta+alpha-1}
  RngStream rng(55);
  const double alpha = 0.5;
  struct Case { double theta, tau; };
  for (const Case cs : {Case{0.0, 1.0}, Case{0.7, 1.0}, Case{-0.2, 2.0}}) {
    const double c =
        alpha * std::pow(cs.tau, -alpha) * beta_fn(cs.theta + alpha, 1.0 - alpha);
    const auto target = LevyDensity::stable_beta(c, cs.theta, alpha);
    std::vector<double> largest;
    for (int rep = 0; rep < 4000; ++rep) {
      auto m = stable_beta_by_scaling(alpha, cs.theta, cs.tau,
                                      TruncationRule::fixed_count(1), rng);
      REQUIRE(!m.weights.empty());
      largest.push_back(m.weights[0]);
    }
    auto ks = ks_one_sample(
        largest, [&](double s) { return std::exp(-target.tail(s)); });
    CHECK(ks.p_value > 0.01);
  }
  CHECK_THROWS_AS(
      stable_beta_by_scaling(0.5, -0.6, 1.0, TruncationRule::fixed_count(1), rng),
      std::invalid_argument);
}

TEST_CASE("thinned stable weights at fixed scale match the closed target") {
  // conditional on the largest jump a = 1, weights of the stable model
  // thinned by (1-s)^{theta+alpha-1} have intensity
  // alpha s^{-1-alpha} (1-s)^{theta+alpha-1}
  RngStream rng(61);
  const double alpha = 0.5, theta = 1.0;
  const auto st = LevyDensity::stable(alpha, alpha);
  const auto target = LevyDensity::stable_beta_simple(alpha, theta);
  std::vector<double> largest;
  for (int rep = 0; rep < 4000; ++rep) {
    auto m = sample_jot(st, ScalingLaw::fixed(1.0),
                        TruncationRule::relative_floor(1e-4), rng);
    auto th = thin(
        m, [&](double s) { return std::pow(1.0 - s, theta + alpha - 1.0); },
        rng);
    REQUIRE(!th.weights.empty());
    largest.push_back(th.weights[0]);
  }
  auto ks = ks_one_sample(largest,
                          [&](double s) { return std::exp(-target.tail(s)); });
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("total mass of scale-invariant weights is generalized Dickman") {
  RngStream rng(71);
  const auto si = LevyDensity::scale_invariant(1.0);
  std::vector<double> totals;
  double mean = 0.0;
  const int reps = 20000;
  for (int rep = 0; rep < reps; ++rep) {
    auto m = sample_jot(si, ScalingLaw::largest_jump(),
                        TruncationRule::relative_floor(1e-6), rng);
    totals.push_back(m.total_mass());
    mean += m.total_mass();
  }
  CHECK(mean / reps == doctest::Approx(1.0).epsilon(0.02));
  auto ks = ks_one_sample(totals, [](double t) { return dickman_cdf(1.0, t); });
  CHECK(ks.p_value > 0.01);
  // half the mass lies at or below 1
  double below = 0;
  for (double t : totals) below += (t <= 1.0);
  CHECK(below / reps == doctest::Approx(0.5614594835668851).epsilon(0.02));
}

TEST_CASE("measure serialization") {
  UnitaryMeasure m;
  m.weights = {0.5, 0.25};
  m.atoms = {0, 1};
  m.delta_ref = 2.0;
  m.truncation_count = 2;
  m.tail_mass_bound = 1e-4;
  const std::string j = m.to_json();
  CHECK(j.find("\"weights\"") != std::string::npos);
  CHECK(j.find("\"delta_ref\"") != std::string::npos);
  CHECK(m.total_mass() == doctest::Approx(0.75));
}
