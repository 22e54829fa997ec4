#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "jot/diagnostics.hpp"
#include "jot/featmat.hpp"
#include "jot/levy.hpp"
#include "jot/measures.hpp"
#include "jot/posterior.hpp"
#include "jot/quad.hpp"
#include "jot/rng.hpp"
#include "jot/special.hpp"
#include "jot/urns.hpp"

using namespace jot;

TEST_CASE("ibp urn: first-row and cumulative feature counts") {
  RngStream rng(101);
  const double c = 1.0, theta = 1.0;
  const int reps = 100000, n = 4;
  double k1_mean = 0.0, kn_mean = 0.0, kn_sq = 0.0;
  std::vector<long> k1_hist(12, 0), ref_hist(12, 0);
  for (int i = 0; i < reps; ++i) {
    auto st = UrnState::ibp_urn(c, theta);
    ibp_next_row(st, rng);
    k1_mean += st.k_n();
    k1_hist[std::min<long>(st.k_n(), 11)] += 1;
    for (int r = 1; r < n; ++r) ibp_next_row(st, rng);
    kn_mean += st.k_n();
    kn_sq += static_cast<double>(st.k_n()) * st.k_n();
    ref_hist[std::min<long>(rng.poisson(c), 11)] += 1;
  }
  k1_mean /= reps;
  kn_mean /= reps;
  CHECK(chi_square_two_sample(k1_hist, ref_hist).p_value > 0.01);
  // E[K_n] = sum_i c*theta/(theta+i) = H_n at c = theta = 1
  const double hn = 1.0 + 0.5 + 1.0 / 3.0 + 0.25;
  const double se = std::sqrt((kn_sq / reps - kn_mean * kn_mean) / reps);
  CHECK(std::fabs(kn_mean - hn) < 4.0 * se);
  CHECK_THROWS_AS(UrnState::ibp_urn(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("stable urn inclusion frequency") {
  RngStream rng(103);
  const double alpha = 0.5;
  auto base = UrnState::stable_jot_urn(
      alpha, ScalingLaw::distribution(Dist::gamma, {3.0, 2.0}, -2.0));
  base.counts = {1};
  base.n = 2;
  int incl = 0;
  const int reps = 100000;
  for (int i = 0; i < reps; ++i) {
    auto st = base;
    auto row = stable_jot_next_row(st, rng);
    for (long k : row)
      if (k == 0) ++incl;
  }
  // (n_k - alpha)/(n + 1 - alpha) = 0.5/2.5
  CHECK(static_cast<double>(incl) / reps == doctest::Approx(0.2).epsilon(0.03));
}

TEST_CASE("stable urn matches the hierarchical sampler on K_4") {
  RngStream rng(107);
  const double alpha = 0.5, theta = 1.0;
  const auto st_lv = LevyDensity::stable(alpha, alpha);
  // zeta = a^{-alpha} ~ Gamma((theta+alpha)/alpha, c/alpha) with c = alpha
  const auto prior = ScalingLaw::distribution(
      Dist::gamma, {(theta + alpha) / alpha, 1.0}, -1.0 / alpha);
  const int reps = 6000, n = 4, top = 14;
  std::vector<long> urn_hist(top + 1, 0), hier_hist(top + 1, 0);
  for (int i = 0; i < reps; ++i) {
    auto st = UrnState::stable_jot_urn(alpha, prior);
    for (int r = 0; r < n; ++r) stable_jot_next_row(st, rng);
    urn_hist[std::min<long>(st.k_n(), top)] += 1;

    auto m = sample_jot(st_lv, prior, TruncationRule::relative_floor(1e-5), rng);
    auto z = sample_bernoulli_matrix(m, n, rng);
    hier_hist[std::min<long>(static_cast<long>(z.columns.size()), top)] += 1;
  }
  CHECK(chi_square_two_sample(urn_hist, hier_hist).p_value > 0.001);
}

TEST_CASE("interpolating function endpoints") {
  CHECK(bfry_f(1.0, 2.0, -0.7) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(bfry_f(0.0, 2.0, -0.7) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(bfry_f(1.0, 0.3, 0.5) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK_THROWS_AS(bfry_f(1.5, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(bfry_f(0.5, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("two-stage draw follows the conditional mixing density") {
  // z = G / f(U, tau, sigma - k) with G ~ Gamma(k + 1 - sigma, 1) has
  // density proportional to z^{k-sigma-1} e^{-z tau} (1 - e^{-z})
  RngStream rng(113);
  const double sigma = 0.5, tau = 1.5;
  const long k = 2;
  auto dens = [&](double z) {
    return std::pow(z, k - sigma - 1.0) * std::exp(-z * tau) * (-std::expm1(-z));
  };
  // tabulated cdf on a log grid
  const int m = 6000;
  std::vector<double> zs(m), cdf(m, 0.0);
  const double zlo = 1e-8, zhi = 200.0;
  for (int i = 0; i < m; ++i)
    zs[i] = zlo * std::pow(zhi / zlo, static_cast<double>(i) / (m - 1));
  for (int i = 1; i < m; ++i)
    cdf[i] = cdf[i - 1] + 0.5 * (dens(zs[i]) + dens(zs[i - 1])) * (zs[i] - zs[i - 1]);
  for (int i = 0; i < m; ++i) cdf[i] /= cdf[m - 1];
  auto cdf_at = [&](double z) {
    if (z <= zs.front()) return 0.0;
    if (z >= zs.back()) return 1.0;
    auto it = std::lower_bound(zs.begin(), zs.end(), z);
    const std::size_t i = it - zs.begin();
    const double t = (z - zs[i - 1]) / (zs[i] - zs[i - 1]);
    return cdf[i - 1] + t * (cdf[i] - cdf[i - 1]);
  };
  std::vector<double> draws;
  for (int i = 0; i < 100000; ++i) {
    const double g = rng.gamma(k + 1.0 - sigma, 1.0);
    const double f = bfry_f(rng.uniform(), tau, sigma - k);
    draws.push_back(g / f);
  }
  CHECK(ks_one_sample(draws, cdf_at).p_value > 0.01);

  // k = 0, tau -> 0 degenerates to the heavy-tailed base variate
  std::vector<double> a, b;
  for (int i = 0; i < 20000; ++i) {
    const double g = rng.gamma(1.0 - sigma, 1.0);
    const double f = bfry_f(rng.uniform(), 0.0, sigma);
    a.push_back(g / f);
    b.push_back(rng.bfry(sigma));
  }
  CHECK(ks_two_sample(a, b).p_value > 0.01);
}

TEST_CASE("poisson-mixed pmf closed form") {
  const double sigma = 0.5, tau = 1.0;
  CHECK(poisson_bfry_pmf(sigma, tau, 0) ==
        doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
  CHECK(poisson_bfry_pmf(sigma, tau, 1) ==
        doctest::Approx(0.5 * (1.0 - 1.0 / std::sqrt(2.0))).epsilon(1e-12));
  // the tail is a power law; sigma * sum_{j>J} Gamma(j-sigma)/j! telescopes
  // to Gamma(J+1-sigma)/Gamma(J+1), and the geometric part is negligible
  const long J = 200;
  double total = 0.0;
  for (long j = 0; j <= J; ++j) total += poisson_bfry_pmf(sigma, tau, j);
  const double tail = std::pow(tau, sigma) *
                      std::exp(log_gamma(J + 1.0 - sigma) - log_gamma(J + 1.0) -
                               log_gamma(1.0 - sigma));
  CHECK(total + tail == doctest::Approx(1.0).epsilon(1e-8));

  // pmf equals the mixture integral
  for (long j : {2L, 5L}) {
    const double byquad = quad(
        [&](double z) {
          return poisson_pmf(j, tau * z) * sigma / std::tgamma(1.0 - sigma) *
                 std::pow(z, -sigma - 1.0) * (-std::expm1(-z));
        },
        0.0, std::numeric_limits<double>::infinity(), 1e-11);
    CHECK(poisson_bfry_pmf(sigma, tau, j) == doctest::Approx(byquad).epsilon(1e-8));
  }
  CHECK_THROWS_AS(poisson_bfry_pmf(1.5, 1.0, 0), std::invalid_argument);
}

TEST_CASE("conditional increment pmf") {
  const double sigma = 0.5, tp = 0.5, tn = 1.0;
  // normalization (k >= 1: geometric tail decay, 500 terms suffice)
  for (long k : {1L, 3L}) {
    double total = 0.0;
    for (long j = 0; j <= 500; ++j)
      total += bfry_increment_pmf(sigma, tn, tp, j, k);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }
  // k = 0, tau_prev = 0 reduces to the marginal pmf
  for (long j : {0L, 1L, 4L})
    CHECK(bfry_increment_pmf(sigma, tn, 0.0, j, 0) ==
          doctest::Approx(poisson_bfry_pmf(sigma, tn, j)).epsilon(1e-12));

  // matches the mixture over the conditional density of z given (k, tau_prev)
  for (long k : {1L, 2L}) {
    auto post = [&](double z) {
      return std::pow(z, k - sigma - 1.0) * std::exp(-z * tp) * (-std::expm1(-z));
    };
    const double norm =
        quad(post, 0.0, std::numeric_limits<double>::infinity(), 1e-11);
    for (long j : {0L, 1L, 3L}) {
      const double byquad =
          quad([&](double z) { return poisson_pmf(j, (tn - tp) * z) * post(z); },
               0.0, std::numeric_limits<double>::infinity(), 1e-11) /
          norm;
      CHECK(bfry_increment_pmf(sigma, tn, tp, j, k) ==
            doctest::Approx(byquad).epsilon(1e-7));
    }
  }

  // Monte Carlo oracle on the two-stage construction
  RngStream rng(131);
  const long k = 1;
  const int reps = 200000;
  double freq0 = 0.0;
  for (int i = 0; i < reps; ++i) {
    const double g = rng.gamma(k + 1.0 - sigma, 1.0);
    const double f = bfry_f(rng.uniform(), tp, sigma - k);
    if (rng.poisson((tn - tp) * g / f) == 0) freq0 += 1.0;
  }
  freq0 /= reps;
  const double p0 = bfry_increment_pmf(sigma, tn, tp, 0, k);
  CHECK(std::fabs(freq0 - p0) < 4.0 * std::sqrt(p0 * (1.0 - p0) / reps));
}

TEST_CASE("intensity increments") {
  // simple stable-beta form: psi_k = alpha Gamma(th+al+k-1) Gamma(1-al) / Gamma(th+k)
  const double al = 0.3, th = 1.0;
  const auto sb = LevyDensity::stable_beta_simple(al, th);
  auto psi = psi_increments(sb, 5);
  for (long kk = 1; kk <= 5; ++kk) {
    const double closed = al *
                          std::exp(log_gamma(th + al + kk - 1.0) +
                                   log_gamma(1.0 - al) - log_gamma(th + kk));
    CHECK(psi[kk - 1] == doctest::Approx(closed).epsilon(1e-10));
    const double byquad = quad(
        [&](double s) {
          return s * std::pow(1.0 - s, kk - 1.0) * sb.density(s);
        },
        0.0, 1.0, 1e-10);
    CHECK(psi[kk - 1] == doctest::Approx(byquad).epsilon(1e-6));
  }
  // scale-invariant: psi_k = theta / k
  const auto si = LevyDensity::scale_invariant(2.0);
  auto ps = psi_increments(si, 4);
  for (long kk = 1; kk <= 4; ++kk)
    CHECK(ps[kk - 1] == doctest::Approx(2.0 / kk).epsilon(1e-10));
  CHECK_THROWS_AS(psi_increments(LevyDensity::gamma_process(1.0), 3),
                  std::invalid_argument);
}

TEST_CASE("urn feature totals follow the mixed-Poisson marginal") {
  RngStream rng(137);
  const double sigma = 0.5;
  const auto sb = LevyDensity::stable_beta_simple(0.3, 1.0);
  auto psi = psi_increments(sb, 3);
  const double tau3 = psi[0] + psi[1] + psi[2];
  const int reps = 40000, top = 20;
  std::vector<long> hist(top + 1, 0);
  for (int i = 0; i < reps; ++i) {
    auto st = UrnState::bfry_urn(sigma, sb);
    st.feature_cap = 100000;
    long k;
    try {
      for (int r = 0; r < 3; ++r) bfry_next_row(st, rng);
      k = st.k_n();
    } catch (const UrnOverflow&) {
      k = top;  // censored run; the count is already above every bin
    }
    hist[std::min<long>(k, top)] += 1;
  }
  for (long j = 0; j <= 6; ++j) {
    const double p = poisson_bfry_pmf(sigma, tau3, j);
    const double freq = static_cast<double>(hist[j]) / reps;
    CHECK(std::fabs(freq - p) < 4.0 * std::sqrt(p * (1.0 - p) / reps) + 1e-12);
  }
  // first row alone: K_1 ~ mixed Poisson at tau = psi_1
  std::vector<long> h1(top + 1, 0);
  for (int i = 0; i < reps; ++i) {
    auto st = UrnState::bfry_urn(sigma, sb);
    st.feature_cap = 100000;
    long k;
    try {
      bfry_next_row(st, rng);
      k = st.k_n();
    } catch (const UrnOverflow&) {
      k = top;
    }
    h1[std::min<long>(k, top)] += 1;
  }
  for (long j = 0; j <= 4; ++j) {
    const double p = poisson_bfry_pmf(sigma, psi[0], j);
    const double freq = static_cast<double>(h1[j]) / reps;
    CHECK(std::fabs(freq - p) < 4.0 * std::sqrt(p * (1.0 - p) / reps) + 1e-12);
  }
}

TEST_CASE("urn dispatch and validation") {
  RngStream rng(139);
  auto st = UrnState::ibp_urn(1.0, 1.0);
  CHECK_THROWS_AS(bfry_next_row(st, rng), std::invalid_argument);
  CHECK_THROWS_AS(stable_jot_next_row(st, rng), std::invalid_argument);
  urn_next_row(st, rng);
  CHECK(st.n == 1);
  CHECK_THROWS_AS(UrnState::bfry_urn(0.5, LevyDensity::gamma_process(1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(UrnState::stable_jot_urn(1.2, ScalingLaw::largest_jump()),
                  std::invalid_argument);
}
