#include "jot/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "jot/diagnostics.hpp"
#include "jot/featmat.hpp"
#include "jot/levy.hpp"
#include "jot/measures.hpp"
#include "jot/pkbridge.hpp"
#include "jot/posterior.hpp"
#include "jot/quad.hpp"
#include "jot/rng.hpp"
#include "jot/special.hpp"
#include "jot/urns.hpp"

namespace jot {
namespace {

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(4) << x;
  return s.str();
}

// --- criterion 1: urn schemes against their hierarchical counterparts ----

double ibp_pair_pvalue(RngStream& rng) {
  const int reps = 20000, n = 4, top = 14;
  const auto si = LevyDensity::scale_invariant(1.0);
  std::vector<long> urn_h(top + 1, 0), hier_h(top + 1, 0);
  for (int i = 0; i < reps; ++i) {
    auto st = UrnState::ibp_urn(1.0, 1.0);
    for (int r = 0; r < n; ++r) ibp_next_row(st, rng);
    urn_h[std::min<long>(st.k_n(), top)] += 1;
    auto m = sample_jot(si, ScalingLaw::largest_jump(),
                        TruncationRule::relative_floor(1e-6), rng);
    auto z = sample_bernoulli_matrix(m, n, rng);
    hier_h[std::min<long>(static_cast<long>(z.columns.size()), top)] += 1;
  }
  return chi_square_two_sample(urn_h, hier_h).p_value;
}

double stable_pair_pvalue(RngStream& rng) {
  const double alpha = 0.5, theta = 1.0;
  const auto lv = LevyDensity::stable(alpha, alpha);
  const auto prior = ScalingLaw::distribution(
      Dist::gamma, {(theta + alpha) / alpha, 1.0}, -1.0 / alpha);
  const int reps = 20000, n = 4, top = 16;
  std::vector<long> urn_h(top + 1, 0), hier_h(top + 1, 0);
  for (int i = 0; i < reps; ++i) {
    auto st = UrnState::stable_jot_urn(alpha, prior);
    for (int r = 0; r < n; ++r) stable_jot_next_row(st, rng);
    urn_h[std::min<long>(st.k_n(), top)] += 1;
    auto m = sample_jot(lv, prior, TruncationRule::relative_floor(1e-6), rng);
    auto z = sample_bernoulli_matrix(m, n, rng);
    hier_h[std::min<long>(static_cast<long>(z.columns.size()), top)] += 1;
  }
  return chi_square_two_sample(urn_h, hier_h).p_value;
}

double bfry_pair_pvalue(RngStream& rng) {
  const double sigma = 0.5;
  const auto sb = LevyDensity::stable_beta_simple(0.3, 1.0);
  auto psi = psi_increments(sb, 4);
  const double tau4 = psi[0] + psi[1] + psi[2] + psi[3];
  const int reps = 20000, n = 4, top = 25;
  std::vector<long> urn_h(top + 1, 0), hier_h(top + 1, 0);
  for (int i = 0; i < reps; ++i) {
    auto st = UrnState::bfry_urn(sigma, sb);
    st.feature_cap = 20000;
    long k;
    try {
      for (int r = 0; r < n; ++r) bfry_next_row(st, rng);
      k = st.k_n();
    } catch (const UrnOverflow&) {
      k = top;  // censored: the count is already above every bin
    }
    urn_h[std::min<long>(k, top)] += 1;

    const double zeta = rng.bfry(sigma);
    long kh;
    if (zeta * tau4 > 200.0) {
      kh = top;  // Poisson(zeta tau4) sits above the top bin a.s.
    } else {
      auto m = sample_scaled_levy(sb, zeta,
                                  TruncationRule::relative_floor(1e-5, 1.0), rng);
      auto z = sample_bernoulli_matrix(m, n, rng);
      kh = static_cast<long>(z.columns.size());
    }
    hier_h[std::min<long>(kh, top)] += 1;
  }
  return chi_square_two_sample(urn_h, hier_h).p_value;
}

bool crit_urn_equivalence(RngStream rng, std::string& detail) {
  const double p1 = ibp_pair_pvalue(rng);
  const double p2 = stable_pair_pvalue(rng);
  const double p3 = bfry_pair_pvalue(rng);
  detail = "p=" + fmt(p1) + "/" + fmt(p2) + "/" + fmt(p3);
  return p1 > 0.001 && p2 > 0.001 && p3 > 0.001;
}

// --- criterion 2: stick-breaking ratio laws -------------------------------

bool crit_stick_ratios(RngStream rng, std::string& detail) {
  const int reps = 100000, depth = 5;
  const auto si = LevyDensity::scale_invariant(1.0);
  std::vector<std::vector<double>> si_ratios(depth);
  for (int i = 0; i < reps; ++i) {
    auto m = sample_jot(si, ScalingLaw::largest_jump(),
                        TruncationRule::fixed_count(depth), rng);
    double prev = 1.0;
    for (int k = 0; k < depth; ++k) {
      si_ratios[k].push_back(m.weights[k] / prev);
      prev = m.weights[k];
    }
  }
  double worst = 1.0;
  for (int k = 0; k < depth; ++k) {
    const double p =
        ks_one_sample(si_ratios[k], [](double x) { return x; }).p_value;
    worst = std::min(worst, p);
  }

  const double c = 1.0, alpha = 0.5, theta = 1.0;
  const auto st = LevyDensity::stable(c, alpha);
  const auto prior = ScalingLaw::distribution(
      Dist::gamma, {(theta + alpha) / alpha, c / alpha}, -1.0 / alpha);
  std::vector<std::vector<double>> st_ratios(depth);
  for (int i = 0; i < reps; ++i) {
    auto m = sample_jot(st, prior, TruncationRule::fixed_count(depth), rng);
    double prev = 1.0;
    for (int k = 0; k < depth; ++k) {
      st_ratios[k].push_back(m.weights[k] / prev);
      prev = m.weights[k];
    }
  }
  double worst_st = 1.0;
  for (int k = 0; k < depth; ++k) {
    const double b = theta + alpha * (k + 1);
    const double p =
        ks_one_sample(st_ratios[k], [b](double x) { return std::pow(x, b); })
            .p_value;
    worst_st = std::min(worst_st, p);
  }
  detail = "min p=" + fmt(worst) + " (uniform), " + fmt(worst_st) + " (beta)";
  return worst > 0.01 && worst_st > 0.01;
}

// --- criterion 3: generalized Dickman law of the total mass ---------------

bool crit_dickman(RngStream rng, std::string& detail) {
  const double plateau = 0.5614594835668851;  // e^{-gamma}
  double worst = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double t = i / 200.0;
    worst = std::max(worst, std::fabs(dickman_pdf(1.0, t) - plateau));
  }

  const auto si = LevyDensity::scale_invariant(1.0);
  const int reps = 1000000, bins = 50;
  const double hi = 5.0;
  std::vector<long> hist(bins + 1, 0);
  long below_one = 0;
  for (int i = 0; i < reps; ++i) {
    auto m = sample_jot(si, ScalingLaw::largest_jump(),
                        TruncationRule::relative_floor(1e-6), rng);
    const double t = m.total_mass();
    below_one += (t <= 1.0);
    const int b = std::min(bins, static_cast<int>(t / hi * bins));
    hist[b] += 1;
  }
  double tv = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double p = dickman_cdf(1.0, (b + 1) * hi / bins) -
                     dickman_cdf(1.0, b * hi / bins);
    tv += std::fabs(static_cast<double>(hist[b]) / reps - p);
  }
  tv += std::fabs(static_cast<double>(hist[bins]) / reps -
                  (1.0 - dickman_cdf(1.0, hi)));
  tv *= 0.5;
  const double frac = static_cast<double>(below_one) / reps;
  detail = "pdf dev=" + fmt(worst) + " tv=" + fmt(tv) + " P(T<=1)=" + fmt(frac);
  return worst < 1e-4 && tv < 0.02 && std::fabs(frac - plateau) < 0.005;
}

// --- criterion 4: heavy-tailed mixed-Poisson calculus ----------------------

double pmf_total_error(double sigma, double tau) {
  const long J = 400;
  double total = 0.0;
  for (long j = 0; j <= J; ++j) total += poisson_bfry_pmf(sigma, tau, j);
  // the tail beyond J telescopes to a closed ratio of gamma functions;
  // the geometric component is below machine precision at J = 400
  const double tail =
      std::pow(tau, sigma) * std::exp(log_gamma(J + 1.0 - sigma) -
                                      log_gamma(J + 1.0) - log_gamma(1.0 - sigma));
  return std::fabs(total + tail - 1.0);
}

bool crit_poisson_mixture(RngStream rng, std::string& detail) {
  double sum_err = 0.0;
  sum_err = std::max(sum_err, pmf_total_error(0.5, 1.0));
  sum_err = std::max(sum_err, pmf_total_error(0.3, 0.5));
  sum_err = std::max(sum_err, pmf_total_error(0.7, 2.0));

  // mixture-integral oracle for P(0) and P(1) at sigma = 0.5, tau = 1
  const double sigma = 0.5, tau = 1.0;
  auto mixture = [&](long j) {
    return quad(
        [&](double z) {
          return poisson_pmf(j, tau * z) * sigma / std::tgamma(1.0 - sigma) *
                 std::pow(z, -sigma - 1.0) * (-std::expm1(-z));
        },
        0.0, std::numeric_limits<double>::infinity(), 1e-12);
  };
  const double e0 = std::fabs(poisson_bfry_pmf(sigma, tau, 0) - mixture(0));
  const double e1 = std::fabs(poisson_bfry_pmf(sigma, tau, 1) - mixture(1));

  // urn counts against the closed marginal at rows 1, 3, 10
  const auto sb = LevyDensity::stable_beta_simple(0.3, 1.0);
  auto psi = psi_increments(sb, 10);
  std::vector<double> taus(10, 0.0);
  double acc = 0.0;
  for (int k = 0; k < 10; ++k) {
    acc += psi[k];
    taus[k] = acc;
  }
  const int reps = 40000, top = 30;
  const std::vector<int> rows = {1, 3, 10};
  std::vector<std::vector<long>> urn_h(3, std::vector<long>(top + 1, 0));
  for (int i = 0; i < reps; ++i) {
    auto st = UrnState::bfry_urn(0.5, sb);
    st.feature_cap = 20000;
    bool over = false;
    int done = 0;
    for (std::size_t c = 0; c < rows.size(); ++c) {
      long k = top;
      if (!over) {
        try {
          while (done < rows[c]) {
            bfry_next_row(st, rng);
            ++done;
          }
          k = st.k_n();
        } catch (const UrnOverflow&) {
          over = true;  // nondecreasing: censored from here on
        }
      }
      urn_h[c][std::min<long>(over ? top : k, top)] += 1;
    }
  }
  double worst_p = 1.0;
  for (std::size_t c = 0; c < rows.size(); ++c) {
    // reference sample drawn from the closed pmf
    std::vector<double> cdf(top + 1, 0.0);
    double s = 0.0;
    for (int j = 0; j < top; ++j) {
      s += poisson_bfry_pmf(0.5, taus[rows[c] - 1], j);
      cdf[j] = s;
    }
    cdf[top] = 1.0;
    std::vector<long> ref_h(top + 1, 0);
    for (int i = 0; i < reps; ++i) {
      const double u = rng.uniform();
      int j = 0;
      while (j < top && u > cdf[j]) ++j;
      ref_h[j] += 1;
    }
    worst_p = std::min(worst_p, chi_square_two_sample(urn_h[c], ref_h).p_value);
  }
  detail = "sum err=" + fmt(sum_err) + " oracle err=" + fmt(std::max(e0, e1)) +
           " min p=" + fmt(worst_p);
  return sum_err <= 1e-8 && e0 <= 1e-6 && e1 <= 1e-6 && worst_p > 0.001;
}

// --- criterion 5: power-law growth of the feature count -------------------

// Exact-law simulation of the heavy-tailed urn tracking only the
// count-of-counts histogram; feature counts can reach ~1e12+ for small
// sigma, so rows are advanced by binomial promotion instead of per-feature
// coin flips. Poisson draws above 1e8 use a normal approximation whose
// relative error is invisible on the log scale used by the Hill estimator.
long bfry_k_only(double sigma, double sb_alpha, double sb_theta,
                 const std::vector<double>& psi, int nrows, RngStream& rng) {
  std::vector<long> cnt(nrows + 2, 0);
  long k_total = 0;
  double tau = 0.0;
  const long cap = 2000000000000000000L;  // 2e18, saturating
  auto big_poisson = [&](double rate) -> long {
    if (rate <= 1e8) return rng.poisson(rate);
    double u1, u2, s;
    do {
      u1 = 2.0 * rng.uniform() - 1.0;
      u2 = 2.0 * rng.uniform() - 1.0;
      s = u1 * u1 + u2 * u2;
    } while (s >= 1.0 || s == 0.0);
    const double z = u1 * std::sqrt(-2.0 * std::log(s) / s);
    const double v = rate + std::sqrt(rate) * z;
    if (v >= static_cast<double>(cap)) return cap;
    return v > 0 ? static_cast<long>(v) : 0;
  };
  for (int r = 0; r < nrows; ++r) {
    for (long j = r; j >= 1; --j) {
      if (cnt[j] == 0) continue;
      const double p = (j - sb_alpha) / (sb_theta + r);
      const long up = rng.binomial(cnt[j], p);
      cnt[j] -= up;
      cnt[j + 1] += up;
    }
    const double g = rng.gamma(static_cast<double>(k_total) + 1.0 - sigma, 1.0);
    const double f = bfry_f(rng.uniform(), tau, sigma - k_total);
    const long fresh = big_poisson(g * psi[r] / f);
    cnt[1] = (cnt[1] > cap - fresh) ? cap : cnt[1] + fresh;
    k_total = (k_total > cap - fresh) ? cap : k_total + fresh;
    tau += psi[r];
  }
  return k_total;
}

bool crit_power_law(RngStream rng, std::string& detail) {
  const int reps = 100000, nrows = 10;
  std::string ests;
  bool ok = true;
  for (double sigma : {0.3, 0.5, 0.7}) {
    const auto sb = LevyDensity::stable_beta_simple(0.3, 1.0);
    auto psi = psi_increments(sb, nrows);
    std::vector<double> ks;
    ks.reserve(reps);
    for (int i = 0; i < reps; ++i)
      ks.push_back(static_cast<double>(
          bfry_k_only(sigma, 0.3, 1.0, psi, nrows, rng)));
    const double est = tail_index(ks, 0.02, rng).estimate;
    ests += (ests.empty() ? "" : "/") + fmt(est);
    ok = ok && std::fabs(est - sigma) <= 0.1;
  }

  std::vector<double> ibp_ks;
  ibp_ks.reserve(reps);
  for (int i = 0; i < reps; ++i) {
    auto st = UrnState::ibp_urn(1.0, 1.0);
    for (int r = 0; r < nrows; ++r) ibp_next_row(st, rng);
    ibp_ks.push_back(static_cast<double>(st.k_n()));
  }
  const bool ibp_flag = power_law_flag(ibp_ks, rng).is_power_law;
  detail = "hill=" + ests + " ibp flagged=" + (ibp_flag ? "yes" : "no");
  return ok && !ibp_flag;
}

// --- criterion 6: conditioned-mass bridge to exchangeable partitions ------

bool crit_bridge(RngStream rng, std::string& detail) {
  const int reps = 20000, n = 5;
  double worst_p = 1.0;

  // gamma(1) and scale-invariant(1) both induce crp(1)
  for (const auto& lv : {LevyDensity::gamma_process(1.0),
                         LevyDensity::scale_invariant(1.0)}) {
    std::vector<long> bh(n + 1, 0), ch(n + 1, 0);
    for (int i = 0; i < reps; ++i) {
      bh[bridge_partition(lv, ScalingLaw::largest_jump(), n, 1.0, rng)
             .block_count()] += 1;
      ch[crp_sample(1.0, n, rng).block_count()] += 1;
    }
    worst_p = std::min(worst_p, chi_square_two_sample(bh, ch).p_value);
  }

  // stable(0.5): two-parameter law at (0.5, 0.5); the same accepted
  // measures feed the n = 3 one-block probability and the reweighting
  const auto st = LevyDensity::stable(0.5, 0.5);
  std::vector<long> bh(n + 1, 0), ph(n + 1, 0);
  long one3 = 0;
  std::vector<SampleRecord> recs;
  std::vector<int> blocks3;
  recs.reserve(reps);
  for (int i = 0; i < reps; ++i) {
    auto res = condition_mass(st, ScalingLaw::largest_jump(), 1.0, 1000000, rng);
    std::vector<double> norm;
    norm.reserve(res.measure.weights.size());
    for (double w : res.measure.weights) norm.push_back(w / res.mass);
    bh[paintbox(norm, n, rng).block_count()] += 1;
    const long b3 = paintbox(norm, 3, rng).block_count();
    one3 += (b3 == 1);
    blocks3.push_back(static_cast<int>(b3));
    recs.push_back({res.measure.delta_ref, res.mass, 0.0});
    ph[py_sample(0.5, 0.5, n, rng).block_count()] += 1;
  }
  worst_p = std::min(worst_p, chi_square_two_sample(bh, ph).p_value);
  const double frac3 = static_cast<double>(one3) / reps;

  // h(s) = 1/s tilts the stable bridge to the (0.5, 1) law; compare
  // ess-scaled weighted pseudo-counts against a direct reference sample
  auto h = [](double x) { return 1.0 / x; };
  std::vector<double> wts;
  double total = 0.0;
  for (const auto& r : recs) {
    const double w = h(r.a * r.t) / (r.a * st.density(r.a));
    wts.push_back(w);
    total += w;
  }
  double sumsq = 0.0;
  std::vector<double> wfreq(4, 0.0);
  for (std::size_t i = 0; i < wts.size(); ++i) {
    wts[i] /= total;
    sumsq += wts[i] * wts[i];
    wfreq[blocks3[i]] += wts[i];
  }
  const double ess = 1.0 / sumsq;
  std::vector<long> pseudo(4, 0), pyh(4, 0);
  for (int b = 1; b <= 3; ++b)
    pseudo[b] = static_cast<long>(std::lround(ess * wfreq[b]));
  for (int i = 0; i < reps; ++i) pyh[py_sample(0.5, 1.0, 3, rng).block_count()] += 1;
  const double pw = chi_square_two_sample(pseudo, pyh).p_value;
  worst_p = std::min(worst_p, pw);

  detail = "min p=" + fmt(worst_p) + " P(1 block of 3)=" + fmt(frac3) +
           " ess=" + fmt(ess);
  return worst_p > 0.001 && std::fabs(frac3 - 0.2) <= 0.01;
}

// --- criterion 7: sequential predictive vs hierarchical law ---------------

long joint_key(long k, std::vector<long> counts) {
  std::sort(counts.begin(), counts.end());
  long key = std::min(k, 6L);
  for (long c : counts) key = key * 4 + std::min(c, 3L);
  return std::min(key, 1000L);
}

// The scaling posterior depends on the counts only through (K, n) for
// both families exercised here, so grids are cached on that key.
class GridCache {
 public:
  GridCache(LevyDensity lv, ScalingLaw pstar)
      : lv_(std::move(lv)), pstar_(std::move(pstar)) {}
  const GridDistribution& get(long k, long n) {
    const auto key = std::make_pair(k, n);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      ObservationSummary obs;
      obs.n = n;
      obs.counts.assign(static_cast<std::size_t>(k), 1);
      it = cache_
               .emplace(key, delta_posterior(
                                 lv_, scaling_law_density(pstar_, lv_), obs))
               .first;
    }
    return it->second;
  }

 private:
  LevyDensity lv_;
  ScalingLaw pstar_;
  std::map<std::pair<long, long>, GridDistribution> cache_;
};

double predictive_chain_pvalue(const LevyDensity& lv, const ScalingLaw& pstar,
                               RngStream& rng) {
  const int reps = 20000, n = 3;
  GridCache grids(lv, pstar);
  std::map<long, std::pair<long, long>> table;
  for (int i = 0; i < reps; ++i) {
    ObservationSummary obs;
    for (int r = 0; r < n; ++r) {
      PredictiveRow row;
      if (obs.n == 0) {
        auto a0 = [&](RngStream& rr) { return pstar.sample(lv, rr); };
        row = predictive_row(lv, a0, obs, rng);
      } else {
        const auto& g = grids.get(obs.k_n(), obs.n);
        auto as = [&](RngStream& rr) { return g.sample(rr); };
        row = predictive_row(lv, as, obs, rng);
      }
      for (std::size_t k = 0; k < row.include.size(); ++k)
        obs.counts[k] += row.include[k];
      for (long j = 0; j < row.new_count; ++j) obs.counts.push_back(1);
      obs.n += 1;
    }
    table[joint_key(obs.k_n(), obs.counts)].first += 1;

    auto m = sample_jot(lv, pstar, TruncationRule::relative_floor(1e-6), rng);
    auto z = sample_bernoulli_matrix(m, n, rng);
    std::vector<long> counts;
    for (const auto& col : z.columns) counts.push_back(col.size());
    table[joint_key(counts.size(), counts)].second += 1;
  }
  std::vector<long> ha, hb;
  for (const auto& [key, cell] : table) {
    ha.push_back(cell.first);
    hb.push_back(cell.second);
  }
  return chi_square_two_sample(ha, hb).p_value;
}

bool crit_posterior(RngStream rng, std::string& detail) {
  const double p_si = predictive_chain_pvalue(LevyDensity::scale_invariant(1.0),
                                              ScalingLaw::largest_jump(), rng);
  const double p_st = predictive_chain_pvalue(
      LevyDensity::stable(0.5, 0.5),
      ScalingLaw::distribution(Dist::gamma, {3.0, 1.0}, -2.0), rng);

  // unseen-weight law: direct density vs thinning construction
  const auto st = LevyDensity::stable(0.5, 0.5);
  const double a = 1.5;
  const long n = 2;
  const auto direct_lv = posterior_levy(st, a, n);
  std::vector<double> direct, thinned;
  for (int rep = 0; rep < 4000; ++rep) {
    auto rj =
        sample_ranked_jumps(direct_lv, 0.0, TruncationRule::fixed_count(1), rng);
    direct.push_back(rj.jumps[0]);
    auto th = posterior_levy_thinned(st, a, n,
                                     TruncationRule::relative_floor(1e-4), rng);
    thinned.push_back(th.jumps[0]);
  }
  const double p_ks = ks_two_sample(direct, thinned).p_value;
  detail = "chain p=" + fmt(p_si) + "/" + fmt(p_st) + " routes p=" + fmt(p_ks);
  return p_si > 0.001 && p_st > 0.001 && p_ks > 0.01;
}

// --- criterion 8: Poisson approximation bound ------------------------------

bool crit_lecam(RngStream rng, std::string& detail) {
  long fails = 0;
  for (int i = 0; i < 1000; ++i) {
    const int len = 1 + static_cast<int>(rng.uniform() * 30.0);
    std::vector<double> w(std::min(len, 30));
    for (double& x : w) x = rng.uniform();
    if (!lecam_check(w, &rng).pass) ++fails;
  }
  const auto si = LevyDensity::scale_invariant(1.0);
  for (int i = 0; i < 100; ++i) {
    auto m = sample_jot(si, ScalingLaw::largest_jump(),
                        TruncationRule::relative_floor(1e-3), rng);
    if (!lecam_check(m.weights, &rng, 100000).pass) ++fails;
  }
  const double tv = lecam_check({0.5, 0.5}).tv;
  detail = "failures=" + std::to_string(fails) + " tv(.5,.5)=" + fmt(tv);
  return fails == 0 && std::fabs(tv - 0.198) <= 1e-3;
}

// --- criterion 9: thinning equivalence -------------------------------------

bool crit_thinning(RngStream rng, std::string& detail) {
  const double alpha = 0.5, theta = 1.0;
  const auto st = LevyDensity::stable(alpha, alpha);
  const int reps = 10000;
  std::vector<double> la, lb, ta, tb;
  for (int i = 0; i < reps; ++i) {
    auto m = sample_jot(st, ScalingLaw::fixed(1.0),
                        TruncationRule::relative_floor(1e-4, 1.0), rng);
    auto th = thin(
        m, [&](double s) { return std::pow(1.0 - s, theta + alpha - 1.0); },
        rng);
    la.push_back(th.weights.empty() ? 0.0 : th.weights[0]);
    ta.push_back(th.total_mass());

    auto d = stable_beta_by_scaling(alpha, theta, 1.0,
                                    TruncationRule::relative_floor(1e-4, 1.0),
                                    rng);
    lb.push_back(d.weights.empty() ? 0.0 : d.weights[0]);
    tb.push_back(d.total_mass());
  }
  const double p1 = ks_two_sample(la, lb).p_value;
  const double p2 = ks_two_sample(ta, tb).p_value;
  detail = "p=" + fmt(p1) + " (largest), " + fmt(p2) + " (mass)";
  return p1 > 0.01 && p2 > 0.01;
}

// --- criterion 10: small-jump mass decoupling -------------------------------

bool crit_tau_beta(RngStream rng, std::string& detail) {
  const auto si = LevyDensity::scale_invariant(1.0);
  std::vector<double> tvs;
  for (double beta : {1.0, 0.5, 0.1})
    tvs.push_back(
        tau_beta_compare(si, beta, {0.95, 1.05}, 100000, rng).tv);
  detail = "tv=" + fmt(tvs[0]) + "/" + fmt(tvs[1]) + "/" + fmt(tvs[2]);
  return tvs[0] > tvs[1] && tvs[1] > tvs[2] && tvs[2] < 0.05;
}

// --- criterion 11: determinism ----------------------------------------------

std::string probe_transcript(std::uint64_t seed) {
  std::ostringstream ss;
  ss << std::setprecision(17);
  RngStream rng(seed, 999);
  const auto si = LevyDensity::scale_invariant(1.0);
  auto m = sample_jot(si, ScalingLaw::largest_jump(),
                      TruncationRule::relative_floor(1e-4), rng);
  ss << m.to_json();
  auto ibp = UrnState::ibp_urn(1.0, 1.0);
  for (int r = 0; r < 6; ++r)
    for (long k : ibp_next_row(ibp, rng)) ss << ' ' << k;
  auto bfry = UrnState::bfry_urn(0.5, LevyDensity::stable_beta_simple(0.3, 1.0));
  try {
    for (int r = 0; r < 4; ++r)
      for (long k : bfry_next_row(bfry, rng)) ss << ' ' << k;
  } catch (const UrnOverflow&) {
    ss << " overflow";
  }
  ss << bridge_partition(si, ScalingLaw::largest_jump(), 4, 1.0, rng).to_json();
  for (int i = 0; i < 32; ++i) ss << ' ' << rng.gamma(0.7, 1.3);
  return ss.str();
}

bool crit_determinism(std::uint64_t seed, double elapsed_s, std::string& detail) {
  const bool same = probe_transcript(seed) == probe_transcript(seed);
  detail = std::string("replay ") + (same ? "identical" : "DIVERGED") +
           ", elapsed=" + fmt(elapsed_s) + "s";
  return same && elapsed_s < 1800.0;
}

}  // namespace

int run_acceptance(std::uint64_t seed, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  RngStream master(seed);
  int failures = 0;
  out << "acceptance battery (seed " << seed << ")\n";

  struct Entry {
    const char* name;
    bool (*fn)(RngStream, std::string&);
  };
  const Entry entries[] = {
      {"urn vs hierarchical equivalence", crit_urn_equivalence},
      {"stick-breaking ratio laws", crit_stick_ratios},
      {"generalized Dickman total mass", crit_dickman},
      {"heavy-tail mixed-Poisson calculus", crit_poisson_mixture},
      {"power-law feature growth", crit_power_law},
      {"conditioned-mass partition bridge", crit_bridge},
      {"sequential predictive consistency", crit_posterior},
      {"Poisson approximation bound", crit_lecam},
      {"thinning equivalence", crit_thinning},
      {"small-jump mass decoupling", crit_tau_beta},
  };
  int idx = 1;
  for (const auto& e : entries) {
    std::string detail;
    bool ok = false;
    try {
      ok = e.fn(master.derive(static_cast<std::uint64_t>(idx)), detail);
    } catch (const std::exception& ex) {
      detail = std::string("exception: ") + ex.what();
    }
    out << "criterion " << std::setw(2) << idx << " " << e.name << ": "
        << (ok ? "pass" : "FAIL") << " [" << detail << "]\n";
    if (!ok) ++failures;
    ++idx;
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  {
    std::string detail;
    const bool ok = crit_determinism(seed, elapsed, detail);
    out << "criterion " << std::setw(2) << idx << " determinism and runtime: "
        << (ok ? "pass" : "FAIL") << " [" << detail << "]\n";
    if (!ok) ++failures;
  }
  out << (failures == 0 ? "all criteria passed" : "FAILURES present") << "\n";
  return failures;
}

}  // namespace jot
